#include "knnfe/functionals.hpp"

#include "knnfe/special.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace knnfe {

namespace {

double gamma_ratio(double num, double den) {
    // Gamma(num)/Gamma(den) through log-gamma; direct Gamma overflows
    // already for arguments around 170.
    return std::exp(std::lgamma(num) - std::lgamma(den));
}

// (-x)^i for integer i, x > 0.
double neg_pow(double x, std::int64_t i) {
    const double mag = std::pow(x, static_cast<double>(i));
    return (i % 2 != 0) ? -mag : mag;
}

} // namespace

int FunctionalSpec::arity() const {
    switch (kind) {
        case FunctionalKind::Entropy:
        case FunctionalKind::RenyiEntropy:
        case FunctionalKind::GeneralizedEntropy:
            return 1;
        default:
            return 2;
    }
}

void FunctionalSpec::validate() const {
    switch (kind) {
        case FunctionalKind::RenyiEntropy:
        case FunctionalKind::RenyiDivergence:
            if (!(alpha >= 0.0) || alpha == 1.0)
                throw std::invalid_argument(name() + ": requires alpha >= 0, alpha != 1");
            break;
        case FunctionalKind::GeneralizedEntropy:
            if (!(alpha >= 0.0) || alpha == 1.0 || !(beta >= 0.0))
                throw std::invalid_argument(name() +
                                            ": requires alpha >= 0, alpha != 1, beta >= 0");
            break;
        default:
            break;
    }
}

std::string FunctionalSpec::name() const {
    char buf[64];
    switch (kind) {
        case FunctionalKind::Entropy: return "entropy";
        case FunctionalKind::RenyiEntropy:
            std::snprintf(buf, sizeof buf, "renyi-entropy:%g", alpha);
            return buf;
        case FunctionalKind::GeneralizedEntropy:
            std::snprintf(buf, sizeof buf, "gen-entropy:%g,%g", alpha, beta);
            return buf;
        case FunctionalKind::KL: return "kl";
        case FunctionalKind::GeneralizedBetaDivergence:
            std::snprintf(buf, sizeof buf, "gen-beta:%g", beta);
            return buf;
        case FunctionalKind::ReverseKL: return "reverse-kl";
        case FunctionalKind::JensenShannon: return "jsd";
        case FunctionalKind::L2Squared: return "l2sq";
        case FunctionalKind::RenyiDivergence:
            std::snprintf(buf, sizeof buf, "renyi-div:%g", alpha);
            return buf;
        case FunctionalKind::Hellinger: return "hellinger";
        case FunctionalKind::ChiSquared: return "chi2";
        case FunctionalKind::NNClassification: return "nn-class";
    }
    return "?";
}

FunctionalSpec make_functional(FunctionalKind kind, double alpha, double beta) {
    FunctionalSpec spec{kind, alpha, beta};
    spec.validate();
    return spec;
}

FunctionalSpec FunctionalSpec::parse(const std::string& name) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::string rest = name.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string tok =
                rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                params.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (...) {
                throw std::invalid_argument("functional '" + name + "': bad parameter '" +
                                            tok + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto want = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("functional '" + name + "': expected " +
                                        std::to_string(n) + " parameter(s)");
    };
    if (head == "entropy") { want(0); return make_functional(FunctionalKind::Entropy); }
    if (head == "renyi-entropy") { want(1); return make_functional(FunctionalKind::RenyiEntropy, params[0]); }
    if (head == "gen-entropy") { want(2); return make_functional(FunctionalKind::GeneralizedEntropy, params[0], params[1]); }
    if (head == "kl") { want(0); return make_functional(FunctionalKind::KL); }
    if (head == "gen-beta") { want(1); return make_functional(FunctionalKind::GeneralizedBetaDivergence, 0.0, params[0]); }
    if (head == "reverse-kl") { want(0); return make_functional(FunctionalKind::ReverseKL); }
    if (head == "jsd") { want(0); return make_functional(FunctionalKind::JensenShannon); }
    if (head == "l2sq") { want(0); return make_functional(FunctionalKind::L2Squared); }
    if (head == "renyi-div") { want(1); return make_functional(FunctionalKind::RenyiDivergence, params[0]); }
    if (head == "hellinger") { want(0); return make_functional(FunctionalKind::Hellinger); }
    if (head == "chi2") { want(0); return make_functional(FunctionalKind::ChiSquared); }
    if (head == "nn-class") { want(0); return make_functional(FunctionalKind::NNClassification); }
    throw std::invalid_argument("unknown functional '" + name + "'");
}

void check_orders(const FunctionalSpec& spec, std::size_t k, std::size_t l) {
    spec.validate();
    if (k < 1 || (spec.arity() == 2 && l < 1))
        throw std::invalid_argument("orders must be >= 1");
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    switch (spec.kind) {
        case FunctionalKind::RenyiEntropy:
        case FunctionalKind::GeneralizedEntropy:
            if (!(kd > spec.alpha - 1.0))
                throw std::invalid_argument(spec.name() + ": requires k > alpha-1");
            break;
        case FunctionalKind::GeneralizedBetaDivergence:
            if (!(kd > spec.beta - 1.0))
                throw std::invalid_argument(spec.name() + ": requires k > beta-1");
            break;
        case FunctionalKind::ReverseKL:
        case FunctionalKind::JensenShannon:
            if (l < 2) throw std::invalid_argument(spec.name() + ": requires l >= 2");
            break;
        case FunctionalKind::ChiSquared:
            if (l < 3) throw std::invalid_argument(spec.name() + ": requires l >= 3");
            break;
        case FunctionalKind::L2Squared:
            // Existence of the inverse transform behind the closed form.
            if (k < 2 || l < 3)
                throw std::invalid_argument(spec.name() + ": requires k >= 2, l >= 3");
            break;
        case FunctionalKind::RenyiDivergence:
            if (!(kd > spec.alpha - 1.0) || !(ld > 1.0 - spec.alpha))
                throw std::invalid_argument(spec.name() +
                                            ": requires k > alpha-1 and l > 1-alpha");
            break;
        default:
            break;
    }
}

bool orders_valid(const FunctionalSpec& spec, std::size_t k, std::size_t l) {
    try {
        check_orders(spec, k, l);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

double f_value(const FunctionalSpec& spec, double p, std::optional<double> q) {
    spec.validate();
    if (!(p > 0.0)) throw std::domain_error("f_value: p must be positive");
    if (spec.arity() == 2) {
        if (!q || !(*q > 0.0)) throw std::domain_error("f_value: q must be positive");
    }
    const double s = p;
    const double t = q.value_or(0.0);
    switch (spec.kind) {
        case FunctionalKind::Entropy: return -std::log(s);
        case FunctionalKind::RenyiEntropy: return std::pow(s, spec.alpha - 1.0);
        case FunctionalKind::GeneralizedEntropy:
            return std::pow(s, spec.alpha - 1.0) * std::exp(-spec.beta * s);
        case FunctionalKind::KL: return std::log(s / t);
        case FunctionalKind::GeneralizedBetaDivergence:
            return std::pow(s, spec.beta - 1.0) * std::log(s / t);
        case FunctionalKind::ReverseKL: return (t / s) * std::log(t / s);
        case FunctionalKind::JensenShannon: {
            const double r = t / s;
            return (r + 1.0) * std::log(2.0 / (r + 1.0)) + r * std::log(r);
        }
        case FunctionalKind::L2Squared: return (s - t) * (s - t) / s;
        case FunctionalKind::RenyiDivergence: return std::pow(t / s, 1.0 - spec.alpha);
        case FunctionalKind::Hellinger: return 2.0 * (1.0 - std::sqrt(t / s));
        case FunctionalKind::ChiSquared: return (t / s) * (t / s) - 1.0;
        case FunctionalKind::NNClassification: return s / (s + t);
    }
    throw std::logic_error("f_value: unhandled kind");
}

double phi_single_raw(const FunctionalSpec& spec, std::size_t k, double u) {
    const double kd = static_cast<double>(k);
    switch (spec.kind) {
        case FunctionalKind::Entropy:
            return std::log(u) - harmonic(static_cast<std::int64_t>(k) - 1) + euler_gamma;
        case FunctionalKind::RenyiEntropy:
            return gamma_ratio(kd, kd - spec.alpha + 1.0) * std::pow(u, 1.0 - spec.alpha);
        case FunctionalKind::GeneralizedEntropy: {
            if (u < spec.beta) return 0.0;
            const double base = u - spec.beta;
            const double expo = kd - spec.alpha;
            double factor;
            if (base == 0.0)
                factor = expo > 0.0 ? 0.0
                       : expo == 0.0 ? 1.0
                                     : std::numeric_limits<double>::quiet_NaN();
            else
                factor = std::pow(base, expo);
            return gamma_ratio(kd, kd - spec.alpha + 1.0) * factor /
                   std::pow(u, kd - 1.0);
        }
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

namespace {

double phi_jsd(std::size_t k, std::size_t l, double u, double v) {
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    const std::int64_t n = static_cast<std::int64_t>(k + l) - 2;
    const double r = u / v;
    const double log_r = std::log(r);
    const double ratio = (ld - 1.0) / kd * r;

    double value = (ratio + 1.0) * std::log(2.0) +
                   ratio * (harmonic(static_cast<std::int64_t>(l) - 2) -
                            harmonic(static_cast<std::int64_t>(k)) + log_r);

    const double c_inv = 1.0 / binomial(n, static_cast<std::int64_t>(k) - 1);

    double alpha_kl = binomial(n, static_cast<std::int64_t>(k)) * r;
    for (std::int64_t j = 2; j <= static_cast<std::int64_t>(l) - 1; ++j)
        alpha_kl += binomial(n, static_cast<std::int64_t>(k) + j - 1) /
                    (static_cast<double>(j) * static_cast<double>(j - 1)) * neg_pow(r, j);
    alpha_kl *= c_inv;
    value -= alpha_kl;

    if (u >= v) {
        double sum = 0.0;
        for (std::int64_t i = -(static_cast<std::int64_t>(k) - 1);
             i <= static_cast<std::int64_t>(l) - 1; ++i) {
            if (i == 0 || i == 1) continue;
            sum += binomial(n, static_cast<std::int64_t>(k) - 1 + i) /
                   (static_cast<double>(i) * static_cast<double>(i - 1)) * neg_pow(r, i);
        }
        const double c_diff = jsd_coefficient_c(k, l) - jsd_coefficient_c(k + 1, l - 1);
        const double beta_kl =
            -(c_inv * sum - c_inv * c_diff + ratio - 1.0 - log_r * (1.0 - ratio));
        value -= beta_kl;
    }
    return value;
}

double phi_nn_class(std::size_t k, std::size_t l, double u, double v) {
    const std::int64_t n = static_cast<std::int64_t>(k + l) - 2;
    const double r = u / v;
    double sum = 0.0;
    for (std::int64_t i = 0; i <= static_cast<std::int64_t>(l) - 1; ++i)
        sum += binomial(n, i) * neg_pow(v / u, i);
    const double indicator = u >= v ? 1.0 : 0.0;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return sign / binomial(n, static_cast<std::int64_t>(k) - 1) *
           std::pow(r, static_cast<double>(l) - 1.0) * (indicator - sum);
}

} // namespace

double phi_two_raw(const FunctionalSpec& spec, std::size_t k, std::size_t l, double u,
                   double v) {
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    switch (spec.kind) {
        case FunctionalKind::KL:
            return std::log(v / u) + harmonic(static_cast<std::int64_t>(k) - 1) -
                   harmonic(static_cast<std::int64_t>(l) - 1);
        case FunctionalKind::GeneralizedBetaDivergence:
            // Sign as fixed by the Gamma-expectation identity; reduces to
            // the KL estimator function at beta = 1.
            return gamma_ratio(kd, kd - spec.beta + 1.0) * std::pow(u, 1.0 - spec.beta) *
                   (digamma(kd - spec.beta + 1.0) - digamma(ld) + std::log(v / u));
        case FunctionalKind::ReverseKL:
            return (ld - 1.0) / kd * (u / v) *
                   (std::log(u / v) + harmonic(static_cast<std::int64_t>(l) - 2) -
                    harmonic(static_cast<std::int64_t>(k)));
        case FunctionalKind::JensenShannon:
            return phi_jsd(k, l, u, v);
        case FunctionalKind::L2Squared:
            return (kd - 1.0) / u - 2.0 * (ld - 1.0) / v +
                   (ld - 1.0) * (ld - 2.0) / kd * u / (v * v);
        case FunctionalKind::RenyiDivergence:
            return std::exp(std::lgamma(kd) + std::lgamma(ld) -
                            std::lgamma(kd - spec.alpha + 1.0) -
                            std::lgamma(ld + spec.alpha - 1.0)) *
                   std::pow(u / v, 1.0 - spec.alpha);
        case FunctionalKind::Hellinger:
            return 2.0 * (1.0 - std::exp(std::lgamma(kd) + std::lgamma(ld) -
                                         std::lgamma(kd + 0.5) - std::lgamma(ld - 0.5)) *
                                    std::sqrt(u / v));
        case FunctionalKind::ChiSquared:
            return (ld - 1.0) * (ld - 2.0) / ((kd + 1.0) * kd) * (u / v) * (u / v) - 1.0;
        case FunctionalKind::NNClassification:
            return phi_nn_class(k, l, u, v);
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

double phi_single(const FunctionalSpec& spec, std::size_t k, double u) {
    if (spec.arity() != 1) throw std::invalid_argument("phi_single: arity-2 functional");
    check_orders(spec, k);
    if (u < 0.0) throw std::domain_error("phi_single: u must be >= 0");
    const double value = phi_single_raw(spec, k, u);
    if (u == 0.0 && !std::isfinite(value))
        throw std::domain_error("phi_single: " + spec.name() + " undefined at u = 0");
    return value;
}

double phi_two(const FunctionalSpec& spec, std::size_t k, std::size_t l, double u, double v) {
    if (spec.arity() != 2) throw std::invalid_argument("phi_two: arity-1 functional");
    check_orders(spec, k, l);
    if (u < 0.0 || v < 0.0) throw std::domain_error("phi_two: u, v must be >= 0");
    const double value = phi_two_raw(spec, k, l, u, v);
    if ((u == 0.0 || v == 0.0) && !std::isfinite(value))
        throw std::domain_error("phi_two: " + spec.name() + " undefined at u or v = 0");
    return value;
}

double jsd_coefficient_c(std::size_t k, std::size_t l) {
    if (k < 1 || l < 1) throw std::invalid_argument("jsd_coefficient_c: k, l must be >= 1");
    const std::int64_t n = static_cast<std::int64_t>(k + l) - 2;
    const std::int64_t skip = static_cast<std::int64_t>(l) - 1;
    double sum = 0.0;
    for (std::int64_t j = 0; j <= n; ++j) {
        if (j == skip) continue;
        const double sign = (j % 2 != 0) ? -1.0 : 1.0;
        sum += binomial(n, j) * sign / static_cast<double>(skip - j);
    }
    return sum;
}

double eta(double a, double b, double u) {
    if (!(u > 0.0)) throw std::domain_error("eta: u must be positive");
    return u <= 1.0 ? std::pow(u, a) : std::pow(u, b);
}

TailEnvelope tail_envelope(const FunctionalSpec& spec, std::size_t k, std::size_t l,
                           double epsilon) {
    spec.validate();
    const double e = epsilon;
    TailEnvelope env;
    env.two_density = spec.arity() == 2;
    switch (spec.kind) {
        case FunctionalKind::Entropy:
            env.a = -e; env.b = e;
            break;
        case FunctionalKind::RenyiEntropy:
        case FunctionalKind::GeneralizedEntropy:
            env.a = 1.0 - spec.alpha; env.b = 1.0 - spec.alpha;
            break;
        case FunctionalKind::KL:
            env.a = -e; env.b = e; env.a_tilde = -e; env.b_tilde = e;
            break;
        case FunctionalKind::GeneralizedBetaDivergence:
            env.a = 1.0 - spec.beta - e; env.b = 1.0 - spec.beta + e;
            env.a_tilde = -e; env.b_tilde = e;
            break;
        case FunctionalKind::ReverseKL:
            env.a = 1.0 - e; env.b = 1.0 + e;
            env.a_tilde = -1.0 - e; env.b_tilde = e;
            env.paper_stated = false;
            break;
        case FunctionalKind::JensenShannon:
            env.a = -e; env.b = 1.0 + e;
            env.a_tilde = -1.0 - e; env.b_tilde = e;
            env.paper_stated = false;
            break;
        case FunctionalKind::L2Squared:
            env.a = -1.0; env.b = 1.0; env.a_tilde = -2.0; env.b_tilde = 0.0;
            env.paper_stated = false;
            break;
        case FunctionalKind::RenyiDivergence:
            env.a = 1.0 - spec.alpha; env.b = 1.0 - spec.alpha;
            env.a_tilde = spec.alpha - 1.0; env.b_tilde = spec.alpha - 1.0;
            break;
        case FunctionalKind::Hellinger:
            env.a = 0.5; env.b = 0.5; env.a_tilde = -0.5; env.b_tilde = -0.5;
            break;
        case FunctionalKind::ChiSquared:
            env.a = 0.0; env.b = 2.0; env.a_tilde = -2.0; env.b_tilde = 0.0;
            env.paper_stated = false;
            break;
        case FunctionalKind::NNClassification: {
            const double g = std::max(static_cast<double>(l) - 2.0, 0.0);
            env.a = 0.0; env.b = g; env.a_tilde = -g; env.b_tilde = 0.0;
            env.paper_stated = false;
            break;
        }
    }
    (void)k;
    return env;
}

EnvelopeValidity envelope_validity(const TailEnvelope& env, std::size_t k, std::size_t l) {
    EnvelopeValidity ok;
    ok.single_ok = env.a > -static_cast<double>(k);
    ok.two_ok = env.a >= -0.5 * static_cast<double>(k) &&
                (!env.two_density || env.a_tilde >= -0.5 * static_cast<double>(l));
    return ok;
}

std::vector<FunctionalSpec> catalog_functionals() {
    return {
        make_functional(FunctionalKind::Entropy),
        make_functional(FunctionalKind::RenyiEntropy, 3.0),
        make_functional(FunctionalKind::GeneralizedEntropy, 2.0, 0.5),
        make_functional(FunctionalKind::KL),
        make_functional(FunctionalKind::GeneralizedBetaDivergence, 0.0, 3.0),
        make_functional(FunctionalKind::ReverseKL),
        make_functional(FunctionalKind::JensenShannon),
        make_functional(FunctionalKind::L2Squared),
        make_functional(FunctionalKind::RenyiDivergence, 3.0),
        make_functional(FunctionalKind::Hellinger),
        make_functional(FunctionalKind::ChiSquared),
        make_functional(FunctionalKind::NNClassification),
    };
}

} // namespace knnfe
