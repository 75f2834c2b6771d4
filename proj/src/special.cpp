#include "knnfe/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace knnfe {

namespace {

constexpr int harmonic_table_size = 64;

const double* harmonic_table() {
    static const auto table = [] {
        std::array<double, harmonic_table_size> t{};
        t[0] = 0.0;
        for (int i = 1; i < harmonic_table_size; ++i)
            t[i] = t[i - 1] + 1.0 / static_cast<double>(i);
        return t;
    }();
    return table.data();
}

} // namespace

double harmonic(std::int64_t n) {
    if (n < 0) throw std::domain_error("harmonic: n must be >= 0");
    if (n < harmonic_table_size) return harmonic_table()[n];
    // Exact summation up to moderate n; digamma identity beyond.
    if (n <= 256) {
        double h = 0.0;
        for (std::int64_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
        return h;
    }
    return digamma(static_cast<double>(n) + 1.0) + euler_gamma;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
    return std::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: x must be > 0");
    // Recurrence up to x >= 10, then the asymptotic expansion.
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n})
    double series = inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                    inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 -
                    inv2 * (1.0 / 132.0)))));
    return result + std::log(x) - 0.5 * inv - series;
}

namespace {

// Series expansion of P(s,x), effective for x < s + 1.
double lower_gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int i = 0; i < 1000; ++i) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(s * std::log(x) - x - std::lgamma(s));
}

// Modified Lentz continued fraction for Q(s,x), effective for x >= s + 1.
double upper_gamma_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(s * std::log(x) - x - std::lgamma(s));
}

} // namespace

double reg_lower_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("reg_lower_gamma: s must be > 0");
    if (x < 0.0) throw std::domain_error("reg_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return lower_gamma_series(s, x);
    return 1.0 - upper_gamma_cf(s, x);
}

double reg_upper_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("reg_upper_gamma: s must be > 0");
    if (x < 0.0) throw std::domain_error("reg_upper_gamma: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - lower_gamma_series(s, x);
    return upper_gamma_cf(s, x);
}

double lower_incomplete_gamma(double s, double x) {
    return reg_lower_gamma(s, x) * std::exp(std::lgamma(s));
}

double upper_incomplete_gamma(double s, double x) {
    return reg_upper_gamma(s, x) * std::exp(std::lgamma(s));
}

double gamma_cdf(double shape, double rate, double u) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::domain_error("gamma_cdf: shape and rate must be > 0");
    if (u <= 0.0) return 0.0;
    return reg_lower_gamma(shape, rate * u);
}

double log_binomial(std::int64_t n, std::int64_t j) {
    if (j < 0 || j > n) throw std::domain_error("log_binomial: need 0 <= j <= n");
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(n - j) + 1.0);
}

namespace {

constexpr int pascal_rows = 57; // C(56,28) is still exact in a double

const double* pascal_table() {
    static const auto table = [] {
        std::array<double, pascal_rows*(pascal_rows + 1) / 2> t{};
        auto at = [&](int n, int j) -> double& { return t[n * (n + 1) / 2 + j]; };
        for (int n = 0; n < pascal_rows; ++n) {
            at(n, 0) = 1.0;
            at(n, n) = 1.0;
            for (int j = 1; j < n; ++j) at(n, j) = at(n - 1, j - 1) + at(n - 1, j);
        }
        return t;
    }();
    return table.data();
}

} // namespace

double binomial(std::int64_t n, std::int64_t j) {
    if (j < 0 || j > n) return 0.0;
    if (n < pascal_rows) return pascal_table()[n * (n + 1) / 2 + j];
    return std::round(std::exp(log_binomial(n, j)));
}

} // namespace knnfe
