#pragma once

#include "knnfe/functionals.hpp"

#include <cstddef>
#include <optional>

namespace knnfe {

/// The construction behind every catalog entry: with U ~ Gamma(k, p) and
/// V ~ Gamma(l, q) independent, E[phi_k(U)] = f(p) and
/// E[phi_{k,l}(U,V)] = f(p,q). This module evaluates the expectation side
/// by adaptive quadrature so tests can confront it with f_value.

struct OracleResult {
    double expectation = 0.0;
    double f = 0.0;
    double residual = 0.0;   // expectation - f
    double quad_error = 0.0; // achieved quadrature error estimate
    bool converged = true;
};

struct OracleOptions {
    double tol = 1e-9;
    int max_depth = 40;
};

/// E[phi_k(U)], U ~ Gamma(shape k, rate p).
double gamma_expectation_single(const FunctionalSpec& spec, std::size_t k, double p,
                                const OracleOptions& opts = {});

/// E[phi_{k,l}(U,V)], U ~ Gamma(k, p), V ~ Gamma(l, q) independent. The
/// inner integral is split at the u = v diagonal, where the indicator
/// functionals kink.
double gamma_expectation_two(const FunctionalSpec& spec, std::size_t k, std::size_t l,
                             double p, double q, const OracleOptions& opts = {});

/// Residual of the defining identity for one catalog entry and one
/// (k, l, p, q) configuration. Throws on side-condition violations;
/// non-convergence is reported through the result, with the achieved
/// error estimate.
OracleResult gamma_oracle_residual(const FunctionalSpec& spec, std::size_t k, std::size_t l,
                                   double p, std::optional<double> q = std::nullopt,
                                   const OracleOptions& opts = {});

} // namespace knnfe
