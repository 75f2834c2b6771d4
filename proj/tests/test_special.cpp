#include "knnfe/special.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace knnfe;

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    CHECK_THROWS_AS(harmonic(-1), std::domain_error);
    // consistency with the digamma identity for large n
    CHECK(harmonic(1000) ==
          doctest::Approx(digamma(1001.0) + euler_gamma).epsilon(1e-13));
}

TEST_CASE("digamma at integers equals H_{k-1} - gamma") {
    CHECK(digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-13));
    for (int k = 1; k <= 12; ++k)
        CHECK(digamma(static_cast<double>(k)) ==
              doctest::Approx(harmonic(k - 1) - euler_gamma).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-euler_gamma - 2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-2.0), std::domain_error);
}

TEST_CASE("incomplete gamma pair sums to the gamma function") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(0.1, 12.0), ux(0.0, 25.0);
    for (int i = 0; i < 200; ++i) {
        const double s = us(rng);
        const double x = ux(rng);
        const double total = lower_incomplete_gamma(s, x) + upper_incomplete_gamma(s, x);
        CHECK(total == doctest::Approx(std::exp(std::lgamma(s))).epsilon(1e-12));
    }
}

TEST_CASE("incomplete gamma known values") {
    // shape 1: gamma(1,x) = 1 - e^-x
    CHECK(reg_lower_gamma(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(reg_upper_gamma(1.0, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-13));
    CHECK(reg_lower_gamma(3.0, 0.0) == 0.0);
    CHECK(reg_upper_gamma(3.0, 0.0) == 1.0);
    // gamma cdf, shape 1 rate 2 is Exp(2)
    CHECK(gamma_cdf(1.0, 2.0, 1.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(reg_lower_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("incomplete gamma inequalities hold on a spot grid") {
    for (double s : {1.0, 2.5, 4.0, 7.75, 10.0})
        for (double x : {1.0, 3.5, 9.0, 20.0}) {
            CHECK(upper_incomplete_gamma(s, x) <=
                  std::exp(std::lgamma(s) + (s - 1.0) * std::log(x) - x + 1.0) *
                      (1.0 + 1e-12));
        }
    for (double s : {0.25, 1.0, 3.0, 10.0})
        for (double x : {0.25, 2.0, 8.0, 20.0})
            CHECK(lower_incomplete_gamma(s, x) <= std::pow(x, s) / s * (1.0 + 1e-12));
}

TEST_CASE("binomials") {
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(0, 0) == 1.0);
    CHECK(binomial(38, 19) == doctest::Approx(35345263800.0).epsilon(1e-12));
    CHECK(log_binomial(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log_binomial(3, 4), std::domain_error);
}
