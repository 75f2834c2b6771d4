#include "knnfe/distributions.hpp"
#include "knnfe/estimator.hpp"
#include "knnfe/harness.hpp"
#include "knnfe/point_set.hpp"
#include "knnfe/validation.hpp"
#include "knnfe/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace knnfe;

int cmd_estimate(const std::string& input, const std::string& input2,
                 const std::string& functional, std::size_t k, std::size_t l,
                 bool no_truncation, double sigma, double tau, double epsilon,
                 bool as_json) {
    const FunctionalSpec spec = FunctionalSpec::parse(functional);
    const PointSet x = load_points_csv(input);
    const bool two = spec.arity() == 2;
    if (two && input2.empty()) {
        std::cerr << "error: " << functional << " needs a second sample (--input2)\n";
        return 1;
    }
    if (!two && !input2.empty()) {
        std::cerr << "error: " << functional << " takes a single sample\n";
        return 1;
    }

    TruncationWindow wu, wv;
    if (!no_truncation) {
        if (!(sigma > 0.0)) {
            std::cerr << "error: truncation needs --sigma (or pass --no-truncation)\n";
            return 1;
        }
        if (!(tau > 0.0)) tau = sigma;
        const TailEnvelope env = tail_envelope(spec, k, l, epsilon);
        wu = truncation_points_single(x.size(), sigma, env.a, k, x.dim());
        if (two) wv = truncation_points_single(x.size(), tau, env.a_tilde, l, x.dim());
    }

    EstimateResult result;
    if (two) {
        const PointSet y = load_points_csv(input2);
        result = estimate_two(x, y, spec, k, l, wu, wv);
    } else {
        result = estimate_single(x, spec, k, wu);
    }

    if (as_json) {
        nlohmann::json j;
        j["functional"] = spec.name();
        j["k"] = k;
        if (two) j["l"] = l;
        j["m"] = x.size();
        j["d"] = x.dim();
        j["estimate"] = result.value;
        j["truncation"] = !no_truncation;
        if (!no_truncation) {
            j["window_u"] = {{"lo", wu.lo}, {"hi", wu.hi}};
            if (two) j["window_v"] = {{"lo", wv.lo}, {"hi", wv.hi}};
        }
        j["diagnostics"] = {{"in_window", result.diag.in_window},
                            {"out_of_window", result.diag.out_of_window},
                            {"nonfinite_dropped", result.diag.nonfinite_dropped}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("%.17g\n", result.value);
        if (result.diag.nonfinite_dropped > 0)
            std::fprintf(stderr, "warning: %zu non-finite contribution(s) dropped\n",
                         result.diag.nonfinite_dropped);
    }
    return 0;
}

int cmd_rates(const std::string& functional, double sigma, std::size_t d, std::size_t k,
              double tau, std::size_t l, double epsilon) {
    const FunctionalSpec spec = FunctionalSpec::parse(functional);
    const TailEnvelope env = tail_envelope(spec, k, l, epsilon);
    RateExponents rates;
    if (spec.arity() == 1) {
        rates = theoretical_exponent_single(sigma, env.a, k, d);
        std::printf("functional: %s  (envelope a=%g, b=%g)\n", spec.name().c_str(), env.a,
                    env.b);
    } else {
        if (!(tau > 0.0)) tau = sigma;
        rates = theoretical_exponent_two(sigma, env.a, k, tau, env.a_tilde, l, d);
        std::printf("functional: %s  (envelope a=%g, b=%g, a~=%g, b~=%g)\n",
                    spec.name().c_str(), env.a, env.b, env.a_tilde, env.b_tilde);
    }
    std::printf("lambda (bias exponent):   %.12g\n", rates.lambda);
    std::printf("variance exponent:        %.12g\n", rates.variance_exponent);
    std::printf("mse exponent:             %.12g\n", rates.mse_exponent);
    if (!rates.condition_ok)
        std::printf("note: positivity side condition fails; no rate guarantee\n");
    if (rates.suboptimal)
        std::printf("note: this regime's bound is flagged suboptimal\n");
    if (!rates.envelope_ok)
        std::printf("note: envelope violates the theorem constraints (a > -k, a >= -k/2, "
                    "a~ >= -l/2)\n");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_csv) {
    ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
    const SweepTable table = run_mse_sweep(config);
    emit_csv(table, out_csv);
    if (!config.output_json.empty()) emit_json(table, config, config.output_json);
    const RateFit fit = fit_rate_exponent(table.rows);
    std::printf("truth = %.10g (%s, stderr %.3g)\n", table.truth,
                table.truth_oracle.c_str(), table.truth_stderr);
    std::printf("fitted mse exponent = %.4f (r^2 = %.4f)\n", fit.slope, fit.r_squared);
    std::printf("wrote %s\n", out_csv.c_str());
    return 0;
}

int cmd_validate(const std::string& suite) {
    validation::SuiteReport report;
    if (suite == "gamma-oracle") report = validation::gamma_oracle_suite();
    else if (suite == "inc-gamma") report = validation::incomplete_gamma_suite();
    else if (suite == "knn-equiv") report = validation::knn_equivalence_suite();
    else if (suite == "ks") report = validation::ks_suite();
    else {
        std::cerr << "unknown suite '" << suite
                  << "' (expected gamma-oracle|ks|inc-gamma|knn-equiv)\n";
        return 2;
    }
    for (const auto& msg : report.messages) std::cout << "  " << msg << "\n";
    std::printf("%s: %zu case(s), %zu failure(s), worst metric %.3g -> %s\n",
                report.suite.c_str(), report.cases, report.failures, report.worst,
                report.passed() ? "PASS" : "FAIL");
    return report.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-NN estimators for density functionals"};
    app.set_version_flag("--version", knnfe::library_version);
    app.require_subcommand(1);

    // estimate
    std::string input, input2, functional;
    std::size_t k = 1, l = 1;
    bool no_truncation = false, as_json = false;
    double sigma = 0.0, tau = 0.0, epsilon = 0.01;
    auto* est = app.add_subcommand("estimate", "estimate a functional from point files");
    est->add_option("--input", input, "CSV point file for the first sample")->required();
    est->add_option("--input2", input2, "CSV point file for the second sample");
    est->add_option("--functional", functional, "functional name")->required();
    est->add_option("--k", k, "k-NN order of the first sample")->required();
    est->add_option("--l", l, "k-NN order of the second sample");
    est->add_flag("--no-truncation", no_truncation, "disable the indicator windows");
    est->add_option("--sigma", sigma, "smoothness of the first density");
    est->add_option("--tau", tau, "smoothness of the second density (defaults to sigma)");
    est->add_option("--epsilon", epsilon, "envelope epsilon for log-type functionals");
    est->add_flag("--json", as_json, "print a JSON document instead of a bare number");

    // sweep
    std::string config_path, out_csv;
    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo MSE sweep");
    sweep->add_option("--config", config_path, "experiment config JSON")->required();
    sweep->add_option("--out", out_csv, "output CSV path")->required();

    // rates
    std::string rates_functional;
    double rates_sigma = 0.0, rates_tau = 0.0, rates_eps = 0.01;
    std::size_t rates_d = 1, rates_k = 1, rates_l = 1;
    auto* rates = app.add_subcommand("rates", "theoretical convergence exponents");
    rates->add_option("--functional", rates_functional, "functional name")->required();
    rates->add_option("--sigma", rates_sigma, "smoothness of the first density")->required();
    rates->add_option("--d", rates_d, "dimension")->required();
    rates->add_option("--k", rates_k, "k-NN order")->required();
    rates->add_option("--tau", rates_tau, "smoothness of the second density");
    rates->add_option("--l", rates_l, "second k-NN order");
    rates->add_option("--epsilon", rates_eps, "envelope epsilon (0 for limiting exponents)");

    // validate
    std::string suite;
    auto* validate = app.add_subcommand("validate", "run a validation suite");
    validate->add_option("--suite", suite, "gamma-oracle|ks|inc-gamma|knn-equiv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed())
            return cmd_estimate(input, input2, functional, k, l, no_truncation, sigma, tau,
                                epsilon, as_json);
        if (sweep->parsed()) return cmd_sweep(config_path, out_csv);
        if (rates->parsed())
            return cmd_rates(rates_functional, rates_sigma, rates_d, rates_k, rates_tau,
                             rates_l, rates_eps);
        if (validate->parsed()) return cmd_validate(suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
