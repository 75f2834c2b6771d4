// Acceptance suite: one pass/fail line per criterion, exit code 0 only
// when every criterion holds.

#include "knnfe/distributions.hpp"
#include "knnfe/estimator.hpp"
#include "knnfe/harness.hpp"
#include "knnfe/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

using namespace knnfe;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void report(const std::string& id, bool pass, const std::string& detail, double seconds) {
    std::printf("%s %s  %s  [%.1fs]\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// A1: Gamma-expectation identity across the whole catalog grid.
void criterion_a1() {
    Timer t;
    const auto r = validation::gamma_oracle_suite(1e-9, 1e-6, 6);
    for (const auto& msg : r.messages) std::printf("  A1 detail: %s\n", msg.c_str());
    report("A1", r.passed(),
           fmt("gamma-oracle identity: %zu cases, worst |residual| = %.2e (limit 1e-6)",
               r.cases, r.worst),
           t.seconds());
}

// A2: Gamma-limit of the normalized ball volume (KS check + trend).
void criterion_a2() {
    Timer t;
    const auto r = validation::ks_suite(20260801, 2000, 250, 4000, 0.05);
    for (const auto& msg : r.messages) std::printf("  A2 detail: %s\n", msg.c_str());
    report("A2", r.passed(),
           fmt("KS vs Gamma(k, p(x)) at m=4000, k in {1,3,5}: worst %.4f (limit 0.05), "
               "trend vs m=250",
               r.worst),
           t.seconds());
}

// A3: entropy of the truncated Gaussian, untruncated estimator, d in {2,3,4}:
// fitted MSE exponent >= 2/d - 0.15 with r^2 >= 0.9.
void criterion_a3() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (std::size_t d : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
        ExperimentConfig config;
        config.functional = FunctionalSpec::parse("entropy");
        config.density1 = "tgauss:3";
        config.d = d;
        config.k = 5;
        config.sample_sizes = {200, 290, 420, 610, 880, 1270, 1830, 2500};
        config.runs = 100;
        config.seed = 4242;
        config.truncation.enabled = false;
        config.mc_draws = 4'000'000;
        const auto table = run_mse_sweep(config);
        const auto fit = fit_rate_exponent(table.rows);
        const double bound = 2.0 / static_cast<double>(d) - 0.15;
        const bool ok = fit.slope >= bound && fit.r_squared >= 0.9;
        pass = pass && ok;
        detail += fmt("d=%zu: slope %.3f (>= %.3f), r2 %.3f; ", d, fit.slope, bound,
                      fit.r_squared);
    }
    report("A3", pass, "entropy rate vs theory: " + detail, t.seconds());
}

// A4: generalized 3-divergence between truncated Gaussians (scales 1 and
// sqrt 2), d = 3, k = l in {5, 15}: fitted exponent >= Table value - 0.15.
void criterion_a4() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (std::size_t k : {std::size_t{5}, std::size_t{15}}) {
        ExperimentConfig config;
        config.functional = FunctionalSpec::parse("gen-beta:3");
        config.density1 = "tgauss:3";
        config.density2 = "tgauss:3,1.4142135623730951";
        config.d = 3;
        config.k = k;
        config.l = k;
        config.sample_sizes = {200, 290, 420, 610, 880, 1270, 1830, 2500};
        config.runs = 100;
        config.seed = 777;
        config.truncation.enabled = false;
        config.mc_draws = 4'000'000;
        const auto table = run_mse_sweep(config);
        const auto fit = fit_rate_exponent(table.rows);
        // limiting envelope (epsilon -> 0): a = -2, a~ = 0
        const auto theory = theoretical_exponent_two(2.0, -2.0, k, 2.0, 0.0, k, 3);
        const double bound = theory.mse_exponent - 0.15;
        const bool ok = fit.slope >= bound;
        pass = pass && ok;
        detail += fmt("k=l=%zu: slope %.3f (>= %.3f = %.3f - 0.15), r2 %.3f; ", k, fit.slope,
                      bound, theory.mse_exponent, fit.r_squared);
    }
    report("A4", pass, "generalized 3-divergence rate vs theory: " + detail, t.seconds());
}

// A5: exact-value checks within 3 jackknife standard errors at m = 5000.
void criterion_a5() {
    Timer t;
    bool pass = true;
    std::string detail;
    const auto entropy = FunctionalSpec::parse("entropy");
    for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
        const Density box = Density::uniform_box(d, 1.0);
        const PointSet sample = box.sample(5000, 91000 + d);
        const auto est = estimate_single_jackknife(sample, entropy, 5);
        const bool ok = std::fabs(est.value) <= 3.0 * est.stderr_jackknife;
        pass = pass && ok;
        detail += fmt("h(U[0,1]^%zu): %.4f +- %.4f%s; ", d, est.value,
                      est.stderr_jackknife, ok ? "" : " OUT");
    }
    const auto kl = FunctionalSpec::parse("kl");
    const std::vector<std::string> families{"tgauss:3", "texp:4", "tlaplace:3", "tcauchy:3",
                                            "uniform:1"};
    for (const auto& name : families) {
        const Density p = Density::parse(name, 2);
        const PointSet x = p.sample(5000, 1717);
        const PointSet y = p.sample(5000, 2929);
        const auto est = estimate_two_jackknife(x, y, kl, 5, 5);
        const bool ok = std::fabs(est.value) <= 3.0 * est.stderr_jackknife;
        pass = pass && ok;
        detail += fmt("KL(%s||same): %.4f +- %.4f%s; ", name.c_str(), est.value,
                      est.stderr_jackknife, ok ? "" : " OUT");
    }
    report("A5", pass, "zero-truth checks: " + detail, t.seconds());
}

// A6: theoretical exponents reproduce the worked-example rates exactly.
void criterion_a6() {
    Timer t;
    bool pass = true;
    std::string detail;
    auto expect = [&](const char* label, double got, double want) {
        const bool ok = got == want;
        pass = pass && ok;
        if (!ok) detail += fmt("%s: got %.17g want %.17g; ", label, got, want);
    };

    for (std::size_t d : {std::size_t{2}, std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
        const double dd = static_cast<double>(d);
        // differential entropy (a = -eps -> 0 limit): MSE 2/d
        expect("entropy", theoretical_exponent_single(2.0, 0.0, 5, d).mse_exponent,
               2.0 / dd);
        // Renyi-2 entropy: a = -1, no lower truncation needed for k >= 2
        expect("renyi-2", theoretical_exponent_single(2.0, -1.0, 3, d).mse_exponent,
               2.0 / dd);
        // KL with eps-envelopes (limit 0): MSE 2/d
        expect("kl", theoretical_exponent_two(2.0, 0.0, 5, 2.0, 0.0, 5, d).mse_exponent,
               2.0 / dd);
        // Hellinger: (1/2, -1/2) envelopes, both >= -1
        expect("hellinger",
               theoretical_exponent_two(2.0, 0.5, 5, 2.0, -0.5, 5, d).mse_exponent,
               2.0 / dd);
    }
    for (std::size_t d : {std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
        const double dd = static_cast<double>(d);
        for (std::size_t k : {std::size_t{4}, std::size_t{5}, std::size_t{15}}) {
            const double kd = static_cast<double>(k);
            // Renyi-3 entropy: a = -2: MSE 2(k-2)/(d(k-1))
            expect("renyi-3-ent",
                   theoretical_exponent_single(2.0, -2.0, k, d).mse_exponent,
                   2.0 * (kd - 2.0) / (dd * (kd - 1.0)));
            // Renyi-3 divergence: a = -2, a~ = 2
            expect("renyi-3-div",
                   theoretical_exponent_two(2.0, -2.0, k, 2.0, 2.0, k, d).mse_exponent,
                   2.0 * (kd - 2.0) / (dd * (kd - 1.0)));
            // generalized 3-divergence: a = -2 - eps, a~ = eps (limit 0)
            expect("gen-3-div",
                   theoretical_exponent_two(2.0, -2.0, k, 2.0, 0.0, k, d).mse_exponent,
                   2.0 * (kd - 2.0) / (dd * (kd - 1.0)));
        }
    }
    if (pass) detail = "all worked-example exponents reproduced exactly";
    report("A6", pass, detail, t.seconds());
}

// A7: spatial index vs brute force, exact equality.
void criterion_a7() {
    Timer t;
    const auto r = validation::knn_equivalence_suite(20260801, 200);
    for (const auto& msg : r.messages) std::printf("  A7 detail: %s\n", msg.c_str());
    report("A7", r.passed(),
           fmt("kd-tree vs brute force: %zu instances, %zu mismatch(es)", r.cases,
               r.failures),
           t.seconds());
}

// A8: incomplete gamma inequalities over the stated grids.
void criterion_a8() {
    Timer t;
    const auto r = validation::incomplete_gamma_suite();
    for (const auto& msg : r.messages) std::printf("  A8 detail: %s\n", msg.c_str());
    report("A8", r.passed(),
           fmt("incomplete-gamma bounds: %zu grid points, %zu violation(s)", r.cases,
               r.failures),
           t.seconds());
}

} // namespace

int main() {
    criterion_a1();
    criterion_a2();
    criterion_a3();
    criterion_a4();
    criterion_a5();
    criterion_a6();
    criterion_a7();
    criterion_a8();
    if (g_failures == 0)
        std::printf("acceptance: all criteria PASS\n");
    else
        std::printf("acceptance: %d criterion/criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
