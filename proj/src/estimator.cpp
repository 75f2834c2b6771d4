#include "knnfe/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace knnfe {

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

void validate_sigma(double sigma) {
    if (!(sigma > 0.0) || sigma > 2.0)
        throw std::invalid_argument("sigma must lie in (0, 2]");
}

// Branches of the lower-truncation schedule over the envelope exponent a:
// 1: a < -sigma/d - 1, 2: a in [-sigma/d-1, -1), 3: a >= -1.
int schedule_branch(double a, double sigma, std::size_t d) {
    const double low = -sigma / static_cast<double>(d) - 1.0;
    if (a < low) return 1;
    if (a < -1.0) return 2;
    return 3;
}

// Exponent e with alpha_m = Theta(m^-e); branch 3 needs no lower truncation.
double schedule_exponent(int branch, double sigma, std::size_t k, std::size_t d) {
    if (branch == 3) return 0.0;
    if (k == 1)
        throw std::invalid_argument(
            "truncation schedule undefined for k = 1 with a < -1");
    const double dk = static_cast<double>(d) * (static_cast<double>(k) - 1.0);
    return branch == 1 ? std::min(sigma, 1.0) / dk : 1.0 / dk;
}

double windowed_phi(double raw, const TruncationWindow& w, double u,
                    EstimateDiagnostics& diag) {
    if (!(u >= w.lo && u <= w.hi)) {
        ++diag.out_of_window;
        return 0.0;
    }
    ++diag.in_window;
    if (!std::isfinite(raw)) {
        ++diag.nonfinite_dropped;
        return 0.0;
    }
    return raw;
}

} // namespace

TruncationWindow truncation_points_single(std::size_t m, double sigma, double a,
                                          std::size_t k, std::size_t d,
                                          const ScheduleConstants& constants) {
    validate_sigma(sigma);
    if (m <= k) throw std::invalid_argument("truncation_points_single: need m > k");
    if (d == 0) throw std::invalid_argument("truncation_points_single: d must be >= 1");
    const int branch = schedule_branch(a, sigma, d);
    const double e = schedule_exponent(branch, sigma, k, d);
    TruncationWindow w;
    w.lo = e == 0.0 ? 0.0
                    : constants.c_alpha * std::pow(static_cast<double>(m), -e);
    w.hi = constants.c_beta *
           std::pow(std::log(static_cast<double>(m)), constants.polylog_power);
    return w;
}

EstimateResult estimate_from_volumes(const FunctionalSpec& spec, std::size_t k,
                                     std::span<const double> u,
                                     const TruncationWindow& window) {
    check_orders(spec, k);
    if (spec.arity() != 1)
        throw std::invalid_argument("estimate_from_volumes: arity mismatch");
    if (!(window.lo <= window.hi))
        throw std::invalid_argument("estimate_from_volumes: window lo > hi");
    EstimateResult out;
    std::vector<double> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        terms[i] = windowed_phi(phi_single_raw(spec, k, u[i]), window, u[i], out.diag);
    out.value = pairwise_sum(terms) / static_cast<double>(u.size());
    return out;
}

EstimateResult estimate_from_volumes(const FunctionalSpec& spec, std::size_t k,
                                     std::size_t l, std::span<const double> u,
                                     std::span<const double> v,
                                     const TruncationWindow& window_u,
                                     const TruncationWindow& window_v) {
    check_orders(spec, k, l);
    if (spec.arity() != 2)
        throw std::invalid_argument("estimate_from_volumes: arity mismatch");
    if (u.size() != v.size())
        throw std::invalid_argument("estimate_from_volumes: volume count mismatch");
    if (!(window_u.lo <= window_u.hi) || !(window_v.lo <= window_v.hi))
        throw std::invalid_argument("estimate_from_volumes: window lo > hi");
    EstimateResult out;
    std::vector<double> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(v[i] >= window_v.lo && v[i] <= window_v.hi)) {
            ++out.diag.out_of_window;
            terms[i] = 0.0;
            continue;
        }
        terms[i] =
            windowed_phi(phi_two_raw(spec, k, l, u[i], v[i]), window_u, u[i], out.diag);
    }
    out.value = pairwise_sum(terms) / static_cast<double>(u.size());
    return out;
}

EstimateResult estimate_single(const PointSet& sample, const FunctionalSpec& spec,
                               std::size_t k, const TruncationWindow& window) {
    const auto u = self_knn_volumes(sample, k);
    return estimate_from_volumes(spec, k, u, window);
}

EstimateResult estimate_two(const PointSet& sample_x, const PointSet& sample_y,
                            const FunctionalSpec& spec, std::size_t k, std::size_t l,
                            const TruncationWindow& window_u,
                            const TruncationWindow& window_v) {
    const auto u = self_knn_volumes(sample_x, k);
    const auto v = cross_knn_volumes(sample_x, sample_y, l);
    return estimate_from_volumes(spec, k, l, u, v, window_u, window_v);
}

namespace {

double jackknife_stderr(std::span<const double> loo) {
    const double n = static_cast<double>(loo.size());
    const double mean = pairwise_sum(loo) / n;
    double ss = 0.0;
    for (double t : loo) ss += (t - mean) * (t - mean);
    return std::sqrt((n - 1.0) / n * ss);
}

} // namespace

JackknifeEstimate estimate_single_jackknife(const PointSet& sample,
                                            const FunctionalSpec& spec, std::size_t k,
                                            const TruncationWindow& window) {
    const std::size_t m = sample.size();
    if (m <= k + 1)
        throw std::invalid_argument("estimate_single_jackknife: need m > k + 1");
    const std::size_t d = sample.dim();
    const double vd = unit_ball_volume(d);
    KnnIndex index(sample);

    // (k+1)-NN of every point: deleting point j promotes the (k+1)-th
    // neighbor exactly where j was among the first k.
    std::vector<double> rk(m), rk1(m);
    std::vector<std::vector<std::uint32_t>> rev(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto nb = index.knn(sample.row(i), k + 1, i);
        rk[i] = nb[k - 1].dist;
        rk1[i] = nb[k].dist;
        for (std::size_t j = 0; j < k; ++j)
            rev[nb[j].index].push_back(static_cast<std::uint32_t>(i));
    }

    auto vol = [&](double r, double mult) {
        return mult * vd * std::pow(r, static_cast<double>(d));
    };

    JackknifeEstimate out;
    {
        std::vector<double> u(m);
        for (std::size_t i = 0; i < m; ++i) u[i] = vol(rk[i], static_cast<double>(m - 1));
        const auto full = estimate_from_volumes(spec, k, u, window);
        out.value = full.value;
        out.diag = full.diag;
    }

    // Leave-one-out contributions use the reduced multiplier m - 2.
    std::vector<double> base(m), promoted(m);
    EstimateDiagnostics scratch;
    for (std::size_t i = 0; i < m; ++i) {
        const double ub = vol(rk[i], static_cast<double>(m - 2));
        const double up = vol(rk1[i], static_cast<double>(m - 2));
        base[i] = windowed_phi(phi_single_raw(spec, k, ub), window, ub, scratch);
        promoted[i] = windowed_phi(phi_single_raw(spec, k, up), window, up, scratch);
    }
    const double base_total = pairwise_sum(base);
    std::vector<double> loo(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = base_total - base[j];
        for (std::uint32_t i : rev[j])
            if (i != j) s += promoted[i] - base[i];
        loo[j] = s / static_cast<double>(m - 1);
    }
    out.stderr_jackknife = jackknife_stderr(loo);
    return out;
}

JackknifeEstimate estimate_two_jackknife(const PointSet& sample_x, const PointSet& sample_y,
                                         const FunctionalSpec& spec, std::size_t k,
                                         std::size_t l, const TruncationWindow& window_u,
                                         const TruncationWindow& window_v) {
    const std::size_t m = sample_x.size();
    const std::size_t n = sample_y.size();
    if (sample_x.dim() != sample_y.dim())
        throw std::invalid_argument("estimate_two_jackknife: dimension mismatch");
    if (m <= k + 1 || n <= l)
        throw std::invalid_argument("estimate_two_jackknife: need m > k + 1 and n > l");
    const std::size_t d = sample_x.dim();
    const double vd = unit_ball_volume(d);

    KnnIndex index_x(sample_x);
    KnnIndex index_y(sample_y);

    std::vector<double> rk(m), rk1(m), rl(m), rl1(m);
    std::vector<std::vector<std::uint32_t>> rev_x(m), rev_y(n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto nbx = index_x.knn(sample_x.row(i), k + 1, i);
        rk[i] = nbx[k - 1].dist;
        rk1[i] = nbx[k].dist;
        for (std::size_t j = 0; j < k; ++j)
            rev_x[nbx[j].index].push_back(static_cast<std::uint32_t>(i));
        const auto nby = index_y.knn(sample_x.row(i), l + 1);
        rl[i] = nby[l - 1].dist;
        rl1[i] = nby[l].dist;
        for (std::size_t j = 0; j < l; ++j)
            rev_y[nby[j].index].push_back(static_cast<std::uint32_t>(i));
    }

    auto vol = [&](double r, double mult) {
        return mult * vd * std::pow(r, static_cast<double>(d));
    };
    auto contribution = [&](double u, double v, EstimateDiagnostics& diag) {
        if (!(v >= window_v.lo && v <= window_v.hi)) {
            ++diag.out_of_window;
            return 0.0;
        }
        return windowed_phi(phi_two_raw(spec, k, l, u, v), window_u, u, diag);
    };

    check_orders(spec, k, l);
    JackknifeEstimate out;
    std::vector<double> u_full(m), v_full(m);
    for (std::size_t i = 0; i < m; ++i) {
        u_full[i] = vol(rk[i], static_cast<double>(m - 1));
        v_full[i] = vol(rl[i], static_cast<double>(n));
    }
    {
        std::vector<double> terms(m);
        for (std::size_t i = 0; i < m; ++i)
            terms[i] = contribution(u_full[i], v_full[i], out.diag);
        out.value = pairwise_sum(terms) / static_cast<double>(m);
    }

    EstimateDiagnostics scratch;
    // X-side replicates: U promoted where X_j was a neighbor, V unchanged.
    std::vector<double> base_x(m), promoted_x(m);
    for (std::size_t i = 0; i < m; ++i) {
        base_x[i] =
            contribution(vol(rk[i], static_cast<double>(m - 2)), v_full[i], scratch);
        promoted_x[i] =
            contribution(vol(rk1[i], static_cast<double>(m - 2)), v_full[i], scratch);
    }
    const double base_x_total = pairwise_sum(base_x);
    std::vector<double> loo_x(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = base_x_total - base_x[j];
        for (std::uint32_t i : rev_x[j])
            if (i != j) s += promoted_x[i] - base_x[i];
        loo_x[j] = s / static_cast<double>(m - 1);
    }

    // Y-side replicates: V promoted where Y_j was a neighbor, U unchanged.
    std::vector<double> base_y(m), promoted_y(m);
    for (std::size_t i = 0; i < m; ++i) {
        base_y[i] =
            contribution(u_full[i], vol(rl[i], static_cast<double>(n - 1)), scratch);
        promoted_y[i] =
            contribution(u_full[i], vol(rl1[i], static_cast<double>(n - 1)), scratch);
    }
    const double base_y_total = pairwise_sum(base_y);
    std::vector<double> loo_y(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = base_y_total;
        for (std::uint32_t i : rev_y[j]) s += promoted_y[i] - base_y[i];
        loo_y[j] = s / static_cast<double>(m);
    }

    const double se_x = jackknife_stderr(loo_x);
    const double se_y = jackknife_stderr(loo_y);
    out.stderr_jackknife = std::sqrt(se_x * se_x + se_y * se_y);
    return out;
}

RateExponents theoretical_exponent_single(double sigma, double a, std::size_t k,
                                          std::size_t d) {
    validate_sigma(sigma);
    if (k < 1 || d < 1)
        throw std::invalid_argument("theoretical_exponent_single: k, d must be >= 1");
    const double kd = static_cast<double>(k);
    const double dd = static_cast<double>(d);
    const int branch = schedule_branch(a, sigma, d);

    RateExponents out;
    if (branch == 1) {
        if (k == 1)
            throw std::invalid_argument(
                "theoretical_exponent_single: undefined for k = 1 with a < -1");
        out.lambda = std::min(sigma, 1.0) * ((kd + a) / (dd * (kd - 1.0)));
    } else {
        if (branch == 2 && k == 1)
            throw std::invalid_argument(
                "theoretical_exponent_single: undefined for k = 1 with a < -1");
        const double ratio = k > 1 ? (kd + a) / (kd - 1.0)
                                   : std::numeric_limits<double>::infinity();
        out.lambda = std::min(sigma, std::min(ratio, 1.0)) / dd;
    }
    const double e = schedule_exponent(branch, sigma, k, d);
    out.variance_exponent = 1.0 + e * std::min(2.0 * a + kd, 0.0);
    out.mse_exponent = std::min(2.0 * out.lambda, out.variance_exponent);
    out.envelope_ok = a > -kd;
    return out;
}

RateExponents theoretical_exponent_two(double sigma, double a, std::size_t k, double tau,
                                       double a_tilde, std::size_t l, std::size_t d) {
    validate_sigma(sigma);
    validate_sigma(tau);
    if (k < 1 || l < 1 || d < 1)
        throw std::invalid_argument("theoretical_exponent_two: k, l, d must be >= 1");
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    const double dd = static_cast<double>(d);
    const int bu = schedule_branch(a, sigma, d);
    const int bv = schedule_branch(a_tilde, tau, d);

    RateExponents out;
    out.envelope_ok = a >= -0.5 * kd && a_tilde >= -0.5 * ld;
    out.variance_exponent = 1.0;

    if (bu == 3 || bv == 3) {
        // Table caption: with a or a~ in [-1, inf) the exponent collapses
        // to the smaller of the two single-sample exponents.
        const double lu = theoretical_exponent_single(sigma, a, k, d).lambda;
        const double lv = theoretical_exponent_single(tau, a_tilde, l, d).lambda;
        out.lambda = std::min(lu, lv);
    } else if (bu == 2 && bv == 1) {
        // Blank lower-triangular cell: exchange the roles of the samples.
        RateExponents sw = theoretical_exponent_two(tau, a_tilde, l, sigma, a, k, d);
        sw.envelope_ok = out.envelope_ok;
        return sw;
    } else {
        if (k == 1 || l == 1)
            throw std::invalid_argument(
                "theoretical_exponent_two: undefined for order 1 with a < -1");
        out.condition_ok = (kd + a) * (ld + a_tilde) > (a + 1.0) * (a_tilde + 1.0);
        if (bu == 1 && bv == 1) {
            out.lambda = (std::min(std::min(sigma, tau), 1.0) +
                          (a + 1.0) / (kd - 1.0) * std::min(sigma, 1.0) +
                          (a_tilde + 1.0) / (ld - 1.0) * std::min(tau, 1.0)) /
                         dd;
            out.suboptimal = true;
        } else if (bu == 1 && bv == 2) {
            const double c1 = std::min(sigma, 1.0) * ((kd + a) / (kd - 1.0));
            const double c2 = tau;
            const double c3 = (ld + a_tilde) / (ld - 1.0);
            const double c4 = 1.0 + std::min(sigma, 1.0) * (a + 1.0) / (kd - 1.0) +
                              (a_tilde + 1.0) / (ld - 1.0);
            out.lambda = std::min(std::min(c1, c2), std::min(c3, c4)) / dd;
            out.suboptimal = true;
        } else { // (2,2)
            out.lambda = std::min(std::min(sigma, tau),
                                  1.0 + (a + 1.0) / (kd - 1.0) +
                                      (a_tilde + 1.0) / (ld - 1.0)) /
                         dd;
        }
    }
    out.mse_exponent = std::min(2.0 * out.lambda, out.variance_exponent);
    return out;
}

} // namespace knnfe
