#pragma once

#include "knnfe/functionals.hpp"
#include "knnfe/knn.hpp"
#include "knnfe/point_set.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace knnfe {

/// Indicator window [lo, hi]: contributions with a normalized volume
/// outside the window are exactly zero (not clipped).
struct TruncationWindow {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

inline TruncationWindow no_truncation() { return {}; }

struct ScheduleConstants {
    double c_alpha = 1.0;      // Theta-constant of the lower truncation point
    double c_beta = 1.0;       // Theta-constant of the upper truncation point
    double polylog_power = 1.1; // power of log m in the upper truncation
};

/// Lower/upper truncation points (alpha_m, beta_m) for a sample of size m:
/// alpha_m follows the three-branch schedule driven by the envelope
/// exponent a and the smoothness sigma; beta_m = C_beta (log m)^1.1.
/// k = 1 with a < -1 has no defined schedule (the exponent divides by k-1).
TruncationWindow truncation_points_single(std::size_t m, double sigma, double a,
                                          std::size_t k, std::size_t d,
                                          const ScheduleConstants& constants = {});

struct EstimateDiagnostics {
    std::size_t in_window = 0;
    std::size_t out_of_window = 0;
    std::size_t nonfinite_dropped = 0; // non-finite phi inside the window, counted as 0
};

struct EstimateResult {
    double value = 0.0;
    EstimateDiagnostics diag;
};

/// Truncated single-density estimator:
/// (1/m) sum_i phi_k(U_m^(k)(X_i)) 1{U in [lo,hi]}.
EstimateResult estimate_single(const PointSet& sample, const FunctionalSpec& spec,
                               std::size_t k, const TruncationWindow& window = {});

/// Truncated two-density estimator:
/// (1/m) sum_i phi_{k,l}(U_m^(k)(X_i), V_n^(l)(X_i)) 1{U in w_u} 1{V in w_v}.
EstimateResult estimate_two(const PointSet& sample_x, const PointSet& sample_y,
                            const FunctionalSpec& spec, std::size_t k, std::size_t l,
                            const TruncationWindow& window_u = {},
                            const TruncationWindow& window_v = {});

/// Same estimators evaluated from precomputed normalized volumes.
EstimateResult estimate_from_volumes(const FunctionalSpec& spec, std::size_t k,
                                     std::span<const double> u,
                                     const TruncationWindow& window = {});
EstimateResult estimate_from_volumes(const FunctionalSpec& spec, std::size_t k,
                                     std::size_t l, std::span<const double> u,
                                     std::span<const double> v,
                                     const TruncationWindow& window_u = {},
                                     const TruncationWindow& window_v = {});

struct JackknifeEstimate {
    double value = 0.0;
    double stderr_jackknife = 0.0;
    EstimateDiagnostics diag;
};

/// Delete-one jackknife standard error of the single-density estimator;
/// leave-one-out values are recomputed exactly from (k+1)-NN information.
JackknifeEstimate estimate_single_jackknife(const PointSet& sample,
                                            const FunctionalSpec& spec, std::size_t k,
                                            const TruncationWindow& window = {});

/// Delete-one jackknife over both samples; the two contributions combine
/// as the root of summed squared standard errors.
JackknifeEstimate estimate_two_jackknife(const PointSet& sample_x, const PointSet& sample_y,
                                         const FunctionalSpec& spec, std::size_t k,
                                         std::size_t l,
                                         const TruncationWindow& window_u = {},
                                         const TruncationWindow& window_v = {});

/// Bias/variance decay exponents of the estimator's MSE under the
/// truncation schedule (rates in m; larger is faster decay).
struct RateExponents {
    double lambda = 0.0;            // bias exponent: |bias| = O~(m^-lambda)
    double variance_exponent = 1.0; // variance = O~(m^-variance_exponent)
    double mse_exponent = 0.0;      // min(2 lambda, variance_exponent)
    bool condition_ok = true;       // positivity side condition, where stated
    bool suboptimal = false;        // flagged cells of the two-sample table
    bool envelope_ok = true;        // theorem envelope constraints on (a, a~)
};

RateExponents theoretical_exponent_single(double sigma, double a, std::size_t k,
                                          std::size_t d);

RateExponents theoretical_exponent_two(double sigma, double a, std::size_t k, double tau,
                                       double a_tilde, std::size_t l, std::size_t d);

/// Fixed pairwise reduction; estimators use it so sums are bitwise
/// reproducible under any parallel evaluation of the terms.
double pairwise_sum(std::span<const double> terms);

} // namespace knnfe
