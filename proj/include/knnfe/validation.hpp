#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace knnfe::validation {

struct SuiteReport {
    std::string suite;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0; // suite-specific worst metric (residual, violation, ...)
    std::vector<std::string> messages;
    bool passed() const { return failures == 0; }
};

/// Gamma-expectation identity for every catalog functional over the
/// (k,l) in {1..order_max}^2 and (p,q) in {0.25,1,4}^2 grid, skipping
/// combinations that violate side conditions. Fails when any
/// |E[phi] - f| exceeds max_residual.
SuiteReport gamma_oracle_suite(double quad_tol = 1e-9, double max_residual = 1e-6,
                               std::size_t order_max = 6, std::size_t threads = 0);

/// Incomplete-gamma inequalities: Gamma(s,x) <= Gamma(s) x^{s-1} e^{-x+1}
/// on s in [1,10], x in [1,20], and gamma(s,x) <= x^s / s on s in (0,10],
/// x in (0,20].
SuiteReport incomplete_gamma_suite();

/// Spatial index vs brute force: exact distance equality over randomized
/// instances (m <= 500, d <= 6, k <= 10), including duplicate-point and
/// tied-coordinate instances.
SuiteReport knn_equivalence_suite(std::uint64_t seed = 20260801, std::size_t instances = 200);

/// Gamma-limit convergence: KS statistic of the normalized ball volume
/// at the center of the unit box (d = 2) against Gamma(k, 1), for
/// k in {1,3,5}; checks KS(m_large) <= threshold and the monotone trend
/// KS(m_large) < KS(m_small).
SuiteReport ks_suite(std::uint64_t seed = 20260801, std::size_t reps = 2000,
                     std::size_t m_small = 250, std::size_t m_large = 4000,
                     double threshold = 0.05);

} // namespace knnfe::validation
