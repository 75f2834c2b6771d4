#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace knnfe {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // achieved absolute error estimate
    bool converged = true;
    std::size_t evals = 0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        evals += o.evals;
        return *this;
    }
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights (positive half; node 7 is 0).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk_nodes[i];
        const double v = f(c - x) + f(c + x);
        fk += gk_weights[i] * v;
        if (i % 2 == 1) fg += g7_weights[i / 2] * v;
    }
    const double f0 = f(c);
    fk += gk_weights[7] * f0;
    fg += g7_weights[3] * f0;
    kronrod = fk * h;
    err = std::fabs((fk - fg) * h);
}

template <class F>
inline void adapt(F& f, double a, double b, double tol, int depth, QuadResult& out) {
    double v, e;
    gk15(f, a, b, v, e);
    out.evals += 15;
    if (e <= tol || depth <= 0) {
        out.value += v;
        out.error += e;
        if (e > tol) out.converged = false;
        return;
    }
    const double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth - 1, out);
    adapt(f, c, b, 0.5 * tol, depth - 1, out);
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b] to an absolute
/// tolerance. Endpoints are never evaluated, so integrable endpoint
/// singularities (e.g. log u) are handled.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    QuadResult out;
    if (a == b) return out;
    detail::adapt(f, a, b, abs_tol, max_depth, out);
    return out;
}

/// Integrates over consecutive segments [x0,x1], [x1,x2], ... splitting
/// the tolerance across segments. Breakpoints let callers isolate known
/// kinks so each piece is smooth.
template <class F>
QuadResult integrate_segments(F&& f, const std::vector<double>& breakpoints,
                              double abs_tol, int max_depth = 48) {
    QuadResult out;
    if (breakpoints.size() < 2) return out;
    const double tol_each = abs_tol / static_cast<double>(breakpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        out += integrate(f, breakpoints[i], breakpoints[i + 1], tol_each, max_depth);
    return out;
}

} // namespace knnfe
