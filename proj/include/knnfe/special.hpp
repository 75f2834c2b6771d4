#pragma once

#include <cstdint>

namespace knnfe {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// n-th harmonic number H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
double harmonic(std::int64_t n);

/// Natural log of the gamma function for x > 0.
double log_gamma(double x);

/// Digamma psi(x) for x > 0. For integer k, psi(k) = H_{k-1} - gamma.
double digamma(double x);

/// Regularized lower incomplete gamma P(s,x) = gamma(s,x)/Gamma(s),
/// s > 0, x >= 0. Also the CDF of Gamma(shape s, rate 1) at x.
double reg_lower_gamma(double s, double x);

/// Regularized upper incomplete gamma Q(s,x) = 1 - P(s,x).
double reg_upper_gamma(double s, double x);

/// Lower incomplete gamma  gamma(s,x) = int_0^x t^{s-1} e^{-t} dt.
double lower_incomplete_gamma(double s, double x);

/// Upper incomplete gamma  Gamma(s,x) = int_x^inf t^{s-1} e^{-t} dt.
double upper_incomplete_gamma(double s, double x);

/// CDF of Gamma(shape, rate) at u.
double gamma_cdf(double shape, double rate, double u);

/// log C(n, j) via log-gamma; n >= j >= 0.
double log_binomial(std::int64_t n, std::int64_t j);

/// C(n, j) computed as exp(log_binomial); exact to double precision for
/// the small orders used here.
double binomial(std::int64_t n, std::int64_t j);

} // namespace knnfe
