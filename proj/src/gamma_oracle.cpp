#include "knnfe/gamma_oracle.hpp"

#include "knnfe/quadrature.hpp"
#include "knnfe/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace knnfe {

namespace {

// Upper integration cut for a Gamma(shape, rate) weight multiplied by a
// polynomially growing phi: past the cut the absolute contribution is
// below ~1e-17. `poly_margin` absorbs the phi growth u^b.
double gamma_cut(double shape, double rate, double poly_margin) {
    const double s_eff = shape + poly_margin;
    double x = (s_eff + 10.0) / rate;
    while (reg_upper_gamma(s_eff, rate * x) > 1e-18) x *= 1.4;
    return x;
}

double log_gamma_pdf_norm(double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape);
}

} // namespace

double gamma_expectation_single(const FunctionalSpec& spec, std::size_t k, double p,
                                const OracleOptions& opts) {
    if (!(p > 0.0)) throw std::domain_error("gamma_expectation_single: rate must be > 0");
    check_orders(spec, k);
    const double shape = static_cast<double>(k);
    const double log_norm = log_gamma_pdf_norm(shape, p);
    auto integrand = [&](double u) {
        return phi_single_raw(spec, k, u) *
               std::exp(log_norm + (shape - 1.0) * std::log(u) - p * u);
    };
    const double hi = gamma_cut(shape, p, 6.0);
    // A breakpoint at u = 1 isolates the eta-style behavior change; the
    // generalized entropy indicator adds one at u = beta.
    std::vector<double> bp{0.0};
    if (spec.kind == FunctionalKind::GeneralizedEntropy && spec.beta > 0.0 &&
        spec.beta < hi)
        bp.push_back(spec.beta);
    if (1.0 < hi) bp.push_back(1.0);
    bp.push_back(hi);
    auto res = integrate_segments(integrand, bp, opts.tol, opts.max_depth);
    if (!res.converged)
        throw std::runtime_error("gamma_expectation_single: quadrature did not converge "
                                 "(achieved error " + std::to_string(res.error) + ")");
    return res.value;
}

double gamma_expectation_two(const FunctionalSpec& spec, std::size_t k, std::size_t l,
                             double p, double q, const OracleOptions& opts) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::domain_error("gamma_expectation_two: rates must be > 0");
    check_orders(spec, k, l);
    const double ks = static_cast<double>(k);
    const double ls = static_cast<double>(l);
    const double log_norm_u = log_gamma_pdf_norm(ks, p);
    const double log_norm_v = log_gamma_pdf_norm(ls, q);
    const double u_hi = gamma_cut(ks, p, 6.0);
    const double v_hi = gamma_cut(ls, q, 6.0);
    const bool kink = spec.kind == FunctionalKind::JensenShannon ||
                      spec.kind == FunctionalKind::NNClassification;

    const double inner_tol_base = 0.25 * opts.tol / u_hi;
    bool inner_ok = true;
    auto outer = [&](double u) {
        const double wu = std::exp(log_norm_u + (ks - 1.0) * std::log(u) - p * u);
        if (wu < 1e-60) return 0.0;
        auto inner = [&](double v) {
            return phi_two_raw(spec, k, l, u, v) *
                   std::exp(log_norm_v + (ls - 1.0) * std::log(v) - q * v);
        };
        std::vector<double> bp{0.0};
        if (kink && u < v_hi) bp.push_back(u);
        bp.push_back(v_hi);
        // The inner error enters the outer integral weighted by wu, so the
        // inner tolerance can relax where the Gamma weight is small.
        const double inner_tol = std::min(1e-4, inner_tol_base / wu);
        auto res = integrate_segments(inner, bp, inner_tol, opts.max_depth);
        inner_ok = inner_ok && res.converged;
        return res.value * wu;
    };
    std::vector<double> bp{0.0};
    if (kink && v_hi < u_hi) bp.push_back(v_hi); // beyond: inner kink leaves the range
    bp.push_back(u_hi);
    auto res = integrate_segments(outer, bp, 0.5 * opts.tol, opts.max_depth);
    if (!res.converged || !inner_ok)
        throw std::runtime_error("gamma_expectation_two: quadrature did not converge "
                                 "(achieved error " + std::to_string(res.error) + ")");
    return res.value;
}

OracleResult gamma_oracle_residual(const FunctionalSpec& spec, std::size_t k, std::size_t l,
                                   double p, std::optional<double> q,
                                   const OracleOptions& opts) {
    OracleResult out;
    if (spec.arity() == 1) {
        out.expectation = gamma_expectation_single(spec, k, p, opts);
        out.f = f_value(spec, p);
    } else {
        if (!q) throw std::invalid_argument("gamma_oracle_residual: q required for arity 2");
        out.expectation = gamma_expectation_two(spec, k, l, p, *q, opts);
        out.f = f_value(spec, p, q);
    }
    out.residual = out.expectation - out.f;
    out.quad_error = opts.tol;
    return out;
}

} // namespace knnfe
