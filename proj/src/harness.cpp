#include "knnfe/harness.hpp"

#include "knnfe/knn.hpp"
#include "knnfe/special.hpp"
#include "knnfe/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace knnfe {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void ExperimentConfig::validate() const {
    functional.validate();
    check_orders(functional, k, l);
    if (functional.arity() == 2 && density2.empty())
        throw std::invalid_argument("config: density2 required for a two-density functional");
    if (functional.arity() == 1 && !density2.empty())
        throw std::invalid_argument("config: density2 given for a single-density functional");
    if (sample_sizes.empty())
        throw std::invalid_argument("config: sample_sizes must be non-empty");
    for (std::size_t i = 1; i < sample_sizes.size(); ++i)
        if (sample_sizes[i] <= sample_sizes[i - 1])
            throw std::invalid_argument("config: sample_sizes must be strictly increasing");
    if (runs < 2) throw std::invalid_argument("config: runs must be >= 2");
    const std::size_t order = std::max(k, functional.arity() == 2 ? l : std::size_t{1});
    if (sample_sizes.front() <= order)
        throw std::invalid_argument("config: every sample size must exceed max(k, l)");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    c.functional = FunctionalSpec::parse(j.at("functional").get<std::string>());
    c.density1 = j.at("density1").get<std::string>();
    c.density2 = j.value("density2", std::string{});
    c.d = j.at("d").get<std::size_t>();
    c.k = j.at("k").get<std::size_t>();
    c.l = j.value("l", std::size_t{1});
    c.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    c.runs = j.at("runs").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("truncation")) {
        const json& t = j.at("truncation");
        c.truncation.enabled = t.value("enabled", true);
        c.truncation.c_alpha = t.value("c_alpha", 1.0);
        c.truncation.c_beta = t.value("c_beta", 1.0);
        c.truncation.epsilon = t.value("epsilon", 0.01);
    }
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("tau")) c.tau = j.at("tau").get<double>();
    c.mc_draws = j.value("mc_draws", std::size_t{10'000'000});
    c.threads = j.value("threads", std::size_t{0});
    c.output_csv = j.value("output_csv", std::string{});
    c.output_json = j.value("output_json", std::string{});
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["functional"] = functional.name();
    j["density1"] = density1;
    if (!density2.empty()) j["density2"] = density2;
    j["d"] = d;
    j["k"] = k;
    if (functional.arity() == 2) j["l"] = l;
    j["sample_sizes"] = sample_sizes;
    j["runs"] = runs;
    j["seed"] = seed;
    j["truncation"] = {{"enabled", truncation.enabled},
                       {"c_alpha", truncation.c_alpha},
                       {"c_beta", truncation.c_beta},
                       {"epsilon", truncation.epsilon}};
    if (sigma) j["sigma"] = *sigma;
    if (tau) j["tau"] = *tau;
    j["mc_draws"] = mc_draws;
    j["threads"] = threads;
    return j.dump(2);
}

std::pair<TruncationWindow, TruncationWindow>
sweep_windows(const ExperimentConfig& config, std::size_t m) {
    if (!config.truncation.enabled) return {no_truncation(), no_truncation()};
    const Density p = Density::parse(config.density1, config.d);
    const double sigma = config.sigma.value_or(p.smoothness_class().sigma);
    const TailEnvelope env =
        tail_envelope(config.functional, config.k, config.l, config.truncation.epsilon);
    const ScheduleConstants constants{config.truncation.c_alpha, config.truncation.c_beta,
                                      1.1};
    const TruncationWindow wu =
        truncation_points_single(m, sigma, env.a, config.k, config.d, constants);
    TruncationWindow wv;
    if (config.functional.arity() == 2) {
        const Density q = Density::parse(config.density2, config.d);
        const double tau = config.tau.value_or(q.smoothness_class().sigma);
        wv = truncation_points_single(m, tau, env.a_tilde, config.l, config.d, constants);
    }
    return {wu, wv};
}

std::vector<double> run_estimates(const ExperimentConfig& config, std::size_t m) {
    config.validate();
    const Density p = Density::parse(config.density1, config.d);
    const bool two = config.functional.arity() == 2;
    const Density q = two ? Density::parse(config.density2, config.d) : p;
    const auto [wu, wv] = sweep_windows(config, m);

    std::vector<double> estimates(config.runs);
    auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t r = begin; r < config.runs; r += stride) {
            const std::uint64_t run_seed = config.seed ^ static_cast<std::uint64_t>(r);
            const PointSet x = p.sample(m, run_seed);
            if (two) {
                const PointSet y = q.sample(m, splitmix64(run_seed));
                estimates[r] =
                    estimate_two(x, y, config.functional, config.k, config.l, wu, wv).value;
            } else {
                estimates[r] = estimate_single(x, config.functional, config.k, wu).value;
            }
        }
    };

    std::size_t n_threads = config.threads == 0
                                ? std::max<std::size_t>(1, std::thread::hardware_concurrency())
                                : config.threads;
    n_threads = std::min(n_threads, config.runs);
    if (n_threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker, t, n_threads);
        for (auto& th : pool) th.join();
    }
    return estimates;
}

SweepRow aggregate_runs(std::span<const double> estimates, double truth, std::size_t m) {
    const std::size_t n = estimates.size();
    if (n < 2) throw std::invalid_argument("aggregate_runs: need at least 2 runs");
    const double nd = static_cast<double>(n);

    double mean_est = 0.0;
    for (double e : estimates) mean_est += e;
    mean_est /= nd;

    double mse = 0.0, var = 0.0;
    for (double e : estimates) {
        mse += (e - truth) * (e - truth);
        var += (e - mean_est) * (e - mean_est);
    }
    mse /= nd;
    var /= nd; // population variance, so mse = bias2 + var exactly

    SweepRow row;
    row.m = m;
    row.mse = mse;
    row.bias2 = (mean_est - truth) * (mean_est - truth);
    row.var = var;

    // Delete-one-run jackknife of the MSE.
    const double sum_sq = mse * nd;
    double loo_mean = 0.0;
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double di = estimates[i] - truth;
        loo[i] = (sum_sq - di * di) / (nd - 1.0);
        loo_mean += loo[i];
    }
    loo_mean /= nd;
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    row.stderr_ = std::sqrt((nd - 1.0) / nd * ss);
    return row;
}

SweepTable run_mse_sweep(const ExperimentConfig& config) {
    config.validate();
    const Density p = Density::parse(config.density1, config.d);
    const bool two = config.functional.arity() == 2;
    const Density q = two ? Density::parse(config.density2, config.d) : p;

    OracleSettings oracle;
    oracle.mc_draws = config.mc_draws;
    oracle.mc_seed = splitmix64(config.seed ^ 0x74727574ULL);
    const TruthValue truth =
        true_functional(config.functional, p, two ? &q : nullptr, oracle);

    SweepTable table;
    table.truth = truth.value;
    table.truth_stderr = truth.stderr_;
    table.truth_oracle = truth.oracle;
    for (std::size_t m : config.sample_sizes) {
        const auto estimates = run_estimates(config, m);
        table.rows.push_back(aggregate_runs(estimates, truth.value, m));
    }
    return table;
}

RateFit fit_rate_exponent(std::span<const double> m, std::span<const double> mse) {
    if (m.size() != mse.size())
        throw std::invalid_argument("fit_rate_exponent: size mismatch");
    if (m.size() < 3)
        throw std::invalid_argument("fit_rate_exponent: need at least 3 rows");
    const std::size_t n = m.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mse[i] > 0.0))
            throw std::invalid_argument("fit_rate_exponent: degenerate fit (mse <= 0)");
        lx[i] = std::log(static_cast<double>(m[i]));
        ly[i] = std::log(mse[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    RateFit fit;
    fit.slope = -slope;
    fit.intercept = my - slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

RateFit fit_rate_exponent(std::span<const SweepRow> rows) {
    std::vector<double> m(rows.size()), mse(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m[i] = static_cast<double>(rows[i].m);
        mse[i] = rows[i].mse;
    }
    return fit_rate_exponent(std::span<const double>(m), std::span<const double>(mse));
}

double ks_statistic_gamma(std::vector<double> values, double shape, double rate) {
    if (values.empty()) throw std::invalid_argument("ks_statistic_gamma: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = gamma_cdf(shape, rate, values[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double run_ks_gamma_test(const Density& density, std::span<const double> x, std::size_t k,
                         std::size_t m, std::size_t reps, std::uint64_t seed) {
    if (x.size() != density.dim())
        throw std::invalid_argument("run_ks_gamma_test: query dimension mismatch");
    const double px = density.pdf(x);
    if (!(px > 0.0))
        throw std::invalid_argument("run_ks_gamma_test: query point outside the support");
    if (m <= k) throw std::invalid_argument("run_ks_gamma_test: need m > k");

    const double vd = unit_ball_volume(density.dim());
    std::vector<double> u(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        const PointSet sample = density.sample(m, seed ^ static_cast<std::uint64_t>(rep));
        const double r = knn_distance_brute(sample, x, k);
        u[rep] = static_cast<double>(m) * vd *
                 std::pow(r, static_cast<double>(density.dim()));
    }
    return ks_statistic_gamma(std::move(u), static_cast<double>(k), px);
}

void emit_csv(const SweepTable& table, std::ostream& out) {
    out << "m,mse,bias2,var,stderr\n";
    char buf[160];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", r.m, r.mse, r.bias2,
                      r.var, r.stderr_);
        out << buf;
    }
}

void emit_csv(const SweepTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    emit_csv(table, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SweepRow> parse_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sweep file: " + path);
    std::vector<SweepRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        SweepRow r;
        unsigned long long m = 0;
        if (std::sscanf(line.c_str(), "%llu,%lg,%lg,%lg,%lg", &m, &r.mse, &r.bias2, &r.var,
                        &r.stderr_) != 5)
            throw std::runtime_error(path + ": malformed sweep row '" + line + "'");
        r.m = static_cast<std::size_t>(m);
        rows.push_back(r);
    }
    return rows;
}

std::string sweep_json(const SweepTable& table, const ExperimentConfig& config) {
    json j;
    j["library_version"] = library_version;
    j["config"] = json::parse(config.to_json());
    j["truth"] = {{"value", table.truth},
                  {"stderr", table.truth_stderr},
                  {"oracle", table.truth_oracle}};
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"m", r.m},
                        {"mse", r.mse},
                        {"bias2", r.bias2},
                        {"var", r.var},
                        {"stderr", r.stderr_}});
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

void emit_json(const SweepTable& table, const ExperimentConfig& config,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << sweep_json(table, config);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace knnfe
