#pragma once

#include "knnfe/distributions.hpp"
#include "knnfe/estimator.hpp"
#include "knnfe/functionals.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace knnfe {

struct TruncationConfig {
    bool enabled = true;
    double c_alpha = 1.0;
    double c_beta = 1.0;
    double epsilon = 0.01; // envelope epsilon for log-type functionals
};

/// Monte Carlo sweep description; JSON files mirror the field names in
/// lower_snake_case.
struct ExperimentConfig {
    FunctionalSpec functional;
    std::string density1;
    std::string density2; // empty for single-density functionals
    std::size_t d = 1;
    std::size_t k = 1;
    std::size_t l = 1;
    std::vector<std::size_t> sample_sizes;
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    TruncationConfig truncation;
    std::optional<double> sigma; // override; defaults to the density's class
    std::optional<double> tau;
    std::size_t mc_draws = 10'000'000; // ground-truth oracle draws for d >= 3
    std::size_t threads = 0;           // 0: hardware concurrency
    std::string output_csv;
    std::string output_json;

    void validate() const;
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

struct SweepRow {
    std::size_t m = 0;
    double mse = 0.0;
    double bias2 = 0.0;
    double var = 0.0;
    double stderr_ = 0.0; // jackknife standard error of the MSE over runs
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double truth = 0.0;
    double truth_stderr = 0.0;
    std::string truth_oracle;
};

/// Truncation windows the sweep applies at sample size m (identity
/// windows when truncation is disabled).
std::pair<TruncationWindow, TruncationWindow>
sweep_windows(const ExperimentConfig& config, std::size_t m);

/// One estimate per run at sample size m. Run r draws with seed
/// (config.seed XOR r), so parallel and serial execution produce
/// identical numbers.
std::vector<double> run_estimates(const ExperimentConfig& config, std::size_t m);

/// MSE aggregation of per-run estimates against the ground truth, with
/// the exact decomposition mse = bias2 + var and a delete-one-run
/// jackknife standard error of the MSE.
SweepRow aggregate_runs(std::span<const double> estimates, double truth, std::size_t m);

SweepTable run_mse_sweep(const ExperimentConfig& config);

struct RateFit {
    double slope = 0.0; // decay exponent, reported positive
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// OLS of log(mse) on log(m); needs >= 3 rows and positive mse.
RateFit fit_rate_exponent(std::span<const SweepRow> rows);
RateFit fit_rate_exponent(std::span<const double> m, std::span<const double> mse);

/// Kolmogorov-Smirnov statistic of `values` against Gamma(shape, rate).
double ks_statistic_gamma(std::vector<double> values, double shape, double rate);

/// Draws `reps` independent samples of size m, forms the normalized k-NN
/// ball volume at the external query point x (multiplier m), and returns
/// the KS statistic against Gamma(k, p(x)).
double run_ks_gamma_test(const Density& density, std::span<const double> x, std::size_t k,
                         std::size_t m, std::size_t reps, std::uint64_t seed);

/// CSV with header m,mse,bias2,var,stderr; '.' decimals, LF endings,
/// byte-deterministic for identical inputs.
void emit_csv(const SweepTable& table, std::ostream& out);
void emit_csv(const SweepTable& table, const std::string& path);
std::vector<SweepRow> parse_sweep_csv(const std::string& path);

/// JSON document mirroring the table plus the config echo and library
/// version.
std::string sweep_json(const SweepTable& table, const ExperimentConfig& config);
void emit_json(const SweepTable& table, const ExperimentConfig& config,
               const std::string& path);

std::uint64_t splitmix64(std::uint64_t x);

} // namespace knnfe
