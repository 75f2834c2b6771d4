#include "knnfe/validation.hpp"

#include "knnfe/distributions.hpp"
#include "knnfe/gamma_oracle.hpp"
#include "knnfe/harness.hpp"
#include "knnfe/knn.hpp"
#include "knnfe/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <thread>

namespace knnfe::validation {

namespace {

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

} // namespace

SuiteReport gamma_oracle_suite(double quad_tol, double max_residual, std::size_t order_max,
                               std::size_t threads) {
    SuiteReport report;
    report.suite = "gamma-oracle";

    struct Case {
        FunctionalSpec spec;
        std::size_t k, l;
        double p, q;
    };
    const double rates[] = {0.25, 1.0, 4.0};
    std::vector<Case> cases;
    for (const auto& spec : catalog_functionals()) {
        if (spec.arity() == 1) {
            for (std::size_t k = 1; k <= order_max; ++k) {
                if (!orders_valid(spec, k)) continue;
                for (double p : rates) cases.push_back({spec, k, 1, p, 0.0});
            }
        } else {
            for (std::size_t k = 1; k <= order_max; ++k)
                for (std::size_t l = 1; l <= order_max; ++l) {
                    if (!orders_valid(spec, k, l)) continue;
                    for (double p : rates)
                        for (double q : rates) cases.push_back({spec, k, l, p, q});
                }
        }
    }

    std::vector<double> residuals(cases.size(), 0.0);
    std::vector<std::string> errors(cases.size());
    OracleOptions opts;
    opts.tol = quad_tol;
    auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < cases.size(); i += stride) {
            const Case& c = cases[i];
            try {
                const auto r = c.spec.arity() == 1
                                   ? gamma_oracle_residual(c.spec, c.k, 1, c.p, {}, opts)
                                   : gamma_oracle_residual(c.spec, c.k, c.l, c.p, c.q, opts);
                residuals[i] = std::fabs(r.residual);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::size_t n_threads =
        threads == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency())
                     : threads;
    n_threads = std::min(n_threads, cases.size());
    if (n_threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t, n_threads);
        for (auto& th : pool) th.join();
    }

    report.cases = cases.size();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Case& c = cases[i];
        if (!errors[i].empty()) {
            ++report.failures;
            report.messages.push_back(c.spec.name() + " k=" + std::to_string(c.k) +
                                      " l=" + std::to_string(c.l) + ": " + errors[i]);
            continue;
        }
        report.worst = std::max(report.worst, residuals[i]);
        if (residuals[i] > max_residual) {
            ++report.failures;
            report.messages.push_back(
                format("%s k=%zu l=%zu p=%g q=%g: |residual| = %.3g", c.spec.name().c_str(),
                       c.k, c.l, c.p, c.q, residuals[i]));
        }
    }
    return report;
}

SuiteReport incomplete_gamma_suite() {
    SuiteReport report;
    report.suite = "inc-gamma";
    // Upper bound: Gamma(s,x) <= Gamma(s) x^{s-1} e^{-x+1} for s >= 1, x >= 1.
    for (double s = 1.0; s <= 10.0 + 1e-12; s += 0.25) {
        for (double x = 1.0; x <= 20.0 + 1e-12; x += 0.25) {
            ++report.cases;
            const double lhs = upper_incomplete_gamma(s, x);
            const double rhs =
                std::exp(std::lgamma(s) + (s - 1.0) * std::log(x) - x + 1.0);
            const double violation = lhs - rhs;
            report.worst = std::max(report.worst, violation);
            if (violation > 1e-12 * rhs) {
                ++report.failures;
                report.messages.push_back(
                    format("upper bound violated at s=%g x=%g: %.6g > %.6g", s, x, lhs, rhs));
            }
        }
    }
    // Lower bound: gamma(s,x) <= x^s / s for s > 0, x > 0.
    for (double s = 0.25; s <= 10.0 + 1e-12; s += 0.25) {
        for (double x = 0.25; x <= 20.0 + 1e-12; x += 0.25) {
            ++report.cases;
            const double lhs = lower_incomplete_gamma(s, x);
            const double rhs = std::pow(x, s) / s;
            const double violation = lhs - rhs;
            report.worst = std::max(report.worst, violation);
            if (violation > 1e-12 * rhs) {
                ++report.failures;
                report.messages.push_back(
                    format("lower bound violated at s=%g x=%g: %.6g > %.6g", s, x, lhs, rhs));
            }
        }
    }
    return report;
}

SuiteReport knn_equivalence_suite(std::uint64_t seed, std::size_t instances) {
    SuiteReport report;
    report.suite = "knn-equiv";
    std::mt19937_64 rng(seed);
    auto unit = [&]() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };

    for (std::size_t inst = 0; inst < instances; ++inst) {
        const std::size_t d = 1 + rng() % 6;
        const std::size_t k = 1 + rng() % 10;
        const std::size_t m = std::max<std::size_t>(k + 2, 20 + rng() % 481);
        std::vector<double> coords(m * d);
        const bool snap = inst % 3 == 0; // coarse grid forces distance ties
        for (double& c : coords) {
            c = unit();
            if (snap) c = std::round(c * 8.0) / 8.0;
        }
        if (inst % 5 == 0) {
            // duplicate a block of rows
            for (std::size_t j = 0; j < d; ++j) coords[(m - 1) * d + j] = coords[j];
        }
        PointSet pts(d, std::move(coords));
        KnnIndex index(pts);

        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            const double a = index.knn_distance(pts.row(i), k, i);
            const double b = knn_distance_brute(pts, pts.row(i), k, i);
            ok = a == b;
        }
        std::vector<double> query(d);
        for (std::size_t t = 0; t < 3 && ok; ++t) {
            for (double& c : query) c = 2.0 * unit() - 0.5;
            const double a = index.knn_distance(query, k);
            const double b = knn_distance_brute(pts, query, k);
            ok = a == b;
        }
        ++report.cases;
        if (!ok) {
            ++report.failures;
            report.messages.push_back(
                format("instance %zu (m=%zu d=%zu k=%zu): index != brute force", inst, m, d,
                       k));
        }
    }
    return report;
}

SuiteReport ks_suite(std::uint64_t seed, std::size_t reps, std::size_t m_small,
                     std::size_t m_large, double threshold) {
    SuiteReport report;
    report.suite = "ks";
    const Density box = Density::uniform_box(2, 1.0);
    const double center[2] = {0.5, 0.5};
    const std::span<const double> x(center, 2);
    for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::size_t{5}}) {
        const double ks_small = run_ks_gamma_test(box, x, k, m_small, reps, seed);
        const double ks_large = run_ks_gamma_test(box, x, k, m_large, reps, seed);
        report.cases += 2;
        report.worst = std::max(report.worst, ks_large);
        if (!(ks_large <= threshold)) {
            ++report.failures;
            report.messages.push_back(
                format("k=%zu: KS(m=%zu) = %.4f exceeds %.2f", k, m_large, ks_large,
                       threshold));
        }
        if (!(ks_large < ks_small)) {
            ++report.failures;
            report.messages.push_back(
                format("k=%zu: KS trend violated: KS(%zu)=%.4f !< KS(%zu)=%.4f", k, m_large,
                       ks_large, m_small, ks_small));
        }
        report.messages.push_back(format("k=%zu: KS(m=%zu)=%.4f KS(m=%zu)=%.4f", k, m_small,
                                         ks_small, m_large, ks_large));
    }
    return report;
}

} // namespace knnfe::validation
