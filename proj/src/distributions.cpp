#include "knnfe/distributions.hpp"

#include "knnfe/knn.hpp"
#include "knnfe/quadrature.hpp"
#include "knnfe/special.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace knnfe {

namespace {

constexpr double pi = 3.14159265358979323846;

// 53-bit uniforms strictly inside (0,1); explicit mapping so samples are
// reproducible across standard libraries.
struct UnitRng {
    std::mt19937_64 rng;
    explicit UnitRng(std::uint64_t seed) : rng(seed) {}
    double next() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }
};

// Box-Muller pair.
void normal_pair(UnitRng& rng, double& z0, double& z1) {
    const double u1 = rng.next();
    const double u2 = rng.next();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * pi * u2);
    z1 = r * std::sin(2.0 * pi * u2);
}

void fill_normal(UnitRng& rng, std::span<double> z) {
    double z0, z1;
    for (std::size_t j = 0; j < z.size(); j += 2) {
        normal_pair(rng, z0, z1);
        z[j] = z0;
        if (j + 1 < z.size()) z[j + 1] = z1;
    }
}

double sq_norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
}

double abs_sum(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += std::fabs(c);
    return s;
}

double coord_sum(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c;
    return s;
}

// K_d(R) = int_0^R d r^{d-1} e^{-r^2/2} dr
double gaussian_shell_mass(std::size_t d, double R) {
    const double dd = static_cast<double>(d);
    auto f = [&](double r) { return dd * std::pow(r, dd - 1.0) * std::exp(-0.5 * r * r); };
    auto res = integrate(f, 0.0, R, 1e-13);
    return res.value;
}

double sin_power_integral(std::size_t d, double upper) {
    const double dd = static_cast<double>(d);
    auto f = [&](double t) { return std::pow(std::sin(t), dd - 1.0); };
    return integrate(f, 0.0, upper, 1e-13).value;
}

enum class SupportShape { Ball, Simplex, CrossPolytope, Box };

SupportShape shape_of(DensityFamily family) {
    switch (family) {
        case DensityFamily::TruncatedGaussian:
        case DensityFamily::TruncatedCauchy: return SupportShape::Ball;
        case DensityFamily::TruncatedExponential: return SupportShape::Simplex;
        case DensityFamily::TruncatedLaplace: return SupportShape::CrossPolytope;
        case DensityFamily::UniformBox: return SupportShape::Box;
    }
    return SupportShape::Box;
}

// Extent parameter of the support: ball radius, simplex/cross radius, box side.
double shape_extent(DensityFamily family, double radius, double scale) {
    return family == DensityFamily::TruncatedGaussian ? radius * scale : radius;
}

} // namespace

Density Density::truncated_gaussian(std::size_t d, double radius, double scale) {
    if (d < 1 || !(radius > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("truncated_gaussian: need d >= 1, R > 0, scale > 0");
    Density p;
    p.family_ = DensityFamily::TruncatedGaussian;
    p.d_ = d;
    p.radius_ = radius;
    p.scale_ = scale;
    const double dd = static_cast<double>(d);
    p.log_prefactor_ = std::lgamma(0.5 * dd + 1.0) - 0.5 * dd * std::log(pi) -
                       std::log(gaussian_shell_mass(d, radius)) - dd * std::log(scale);
    p.acceptance_ = reg_lower_gamma(0.5 * dd, 0.5 * radius * radius);
    return p;
}

Density Density::truncated_exponential(std::size_t d, double radius) {
    if (d < 1 || !(radius > 0.0))
        throw std::invalid_argument("truncated_exponential: need d >= 1, R > 0");
    Density p;
    p.family_ = DensityFamily::TruncatedExponential;
    p.d_ = d;
    p.radius_ = radius;
    p.acceptance_ = reg_lower_gamma(static_cast<double>(d), radius);
    p.log_prefactor_ = -std::log(p.acceptance_);
    return p;
}

Density Density::truncated_laplace(std::size_t d, double radius) {
    if (d < 1 || !(radius > 0.0))
        throw std::invalid_argument("truncated_laplace: need d >= 1, R > 0");
    Density p;
    p.family_ = DensityFamily::TruncatedLaplace;
    p.d_ = d;
    p.radius_ = radius;
    p.acceptance_ = reg_lower_gamma(static_cast<double>(d), radius);
    p.log_prefactor_ =
        -static_cast<double>(d) * std::log(2.0) - std::log(p.acceptance_);
    return p;
}

Density Density::truncated_cauchy(std::size_t d, double radius) {
    if (d < 1 || !(radius > 0.0))
        throw std::invalid_argument("truncated_cauchy: need d >= 1, R > 0");
    Density p;
    p.family_ = DensityFamily::TruncatedCauchy;
    p.d_ = d;
    p.radius_ = radius;
    const double dd = static_cast<double>(d);
    const double ld = sin_power_integral(d, std::atan(radius)) /
                      sin_power_integral(d, 0.5 * pi);
    p.acceptance_ = ld;
    p.log_prefactor_ = std::lgamma(0.5 * (dd + 1.0)) -
                       0.5 * (dd + 1.0) * std::log(pi) - std::log(ld);
    return p;
}

Density Density::uniform_box(std::size_t d, double side) {
    if (d < 1 || !(side > 0.0))
        throw std::invalid_argument("uniform_box: need d >= 1, side > 0");
    Density p;
    p.family_ = DensityFamily::UniformBox;
    p.d_ = d;
    p.radius_ = side;
    p.log_prefactor_ = -static_cast<double>(d) * std::log(side);
    p.acceptance_ = 1.0;
    return p;
}

Density Density::parse(const std::string& name, std::size_t d) {
    const auto colon = name.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("density '" + name + "': missing parameter");
    const std::string head = name.substr(0, colon);
    std::vector<double> params;
    std::string rest = name.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string tok =
            rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            params.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (...) {
            throw std::invalid_argument("density '" + name + "': bad parameter '" + tok +
                                        "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (head == "tgauss") {
        if (params.size() == 1) return truncated_gaussian(d, params[0]);
        if (params.size() == 2) return truncated_gaussian(d, params[0], params[1]);
    } else if (head == "texp" && params.size() == 1) {
        return truncated_exponential(d, params[0]);
    } else if (head == "tlaplace" && params.size() == 1) {
        return truncated_laplace(d, params[0]);
    } else if (head == "tcauchy" && params.size() == 1) {
        return truncated_cauchy(d, params[0]);
    } else if (head == "uniform" && params.size() == 1) {
        return uniform_box(d, params[0]);
    }
    throw std::invalid_argument("unknown density '" + name + "'");
}

std::string Density::name() const {
    char buf[80];
    switch (family_) {
        case DensityFamily::TruncatedGaussian:
            if (scale_ != 1.0)
                std::snprintf(buf, sizeof buf, "tgauss:%g,%.17g", radius_, scale_);
            else
                std::snprintf(buf, sizeof buf, "tgauss:%g", radius_);
            break;
        case DensityFamily::TruncatedExponential:
            std::snprintf(buf, sizeof buf, "texp:%g", radius_);
            break;
        case DensityFamily::TruncatedLaplace:
            std::snprintf(buf, sizeof buf, "tlaplace:%g", radius_);
            break;
        case DensityFamily::TruncatedCauchy:
            std::snprintf(buf, sizeof buf, "tcauchy:%g", radius_);
            break;
        case DensityFamily::UniformBox:
            std::snprintf(buf, sizeof buf, "uniform:%g", radius_);
            break;
    }
    return buf;
}

bool Density::contains(std::span<const double> x) const {
    switch (family_) {
        case DensityFamily::TruncatedGaussian:
            return sq_norm(x) <= (radius_ * scale_) * (radius_ * scale_);
        case DensityFamily::TruncatedCauchy:
            return sq_norm(x) <= radius_ * radius_;
        case DensityFamily::TruncatedExponential: {
            for (double c : x)
                if (c < 0.0) return false;
            return coord_sum(x) <= radius_;
        }
        case DensityFamily::TruncatedLaplace:
            return abs_sum(x) <= radius_;
        case DensityFamily::UniformBox: {
            for (double c : x)
                if (c < 0.0 || c > radius_) return false;
            return true;
        }
    }
    return false;
}

double Density::pdf(std::span<const double> x) const {
    if (x.size() != d_) throw std::invalid_argument("pdf: dimension mismatch");
    if (!contains(x)) return 0.0;
    switch (family_) {
        case DensityFamily::TruncatedGaussian:
            return std::exp(log_prefactor_ - 0.5 * sq_norm(x) / (scale_ * scale_));
        case DensityFamily::TruncatedExponential:
            return std::exp(log_prefactor_ - coord_sum(x));
        case DensityFamily::TruncatedLaplace:
            return std::exp(log_prefactor_ - abs_sum(x));
        case DensityFamily::TruncatedCauchy:
            return std::exp(log_prefactor_ -
                            0.5 * (static_cast<double>(d_) + 1.0) *
                                std::log1p(sq_norm(x)));
        case DensityFamily::UniformBox:
            return std::exp(log_prefactor_);
    }
    return 0.0;
}

double Density::acceptance_probability() const { return acceptance_; }

PointSet Density::sample(std::size_t m, std::uint64_t seed) const {
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    if (acceptance_ < 1e-6)
        throw std::runtime_error("sample: rejection acceptance probability below 1e-6 for " +
                                 name());
    UnitRng rng(seed);
    std::vector<double> coords;
    coords.reserve(m * d_);
    std::vector<double> cand(d_);

    for (std::size_t i = 0; i < m; ++i) {
        while (true) {
            bool ok = false;
            switch (family_) {
                case DensityFamily::TruncatedGaussian: {
                    fill_normal(rng, cand);
                    if (sq_norm(cand) <= radius_ * radius_) {
                        for (double& c : cand) c *= scale_;
                        ok = true;
                    }
                    break;
                }
                case DensityFamily::TruncatedExponential: {
                    for (double& c : cand) c = -std::log(rng.next());
                    ok = coord_sum(cand) <= radius_;
                    break;
                }
                case DensityFamily::TruncatedLaplace: {
                    for (double& c : cand) {
                        const double u = rng.next();
                        c = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
                    }
                    ok = abs_sum(cand) <= radius_;
                    break;
                }
                case DensityFamily::TruncatedCauchy: {
                    fill_normal(rng, cand);
                    double w0, w1;
                    normal_pair(rng, w0, w1);
                    const double w = std::fabs(w0);
                    if (w > 1e-300) {
                        for (double& c : cand) c /= w;
                        ok = sq_norm(cand) <= radius_ * radius_;
                    }
                    break;
                }
                case DensityFamily::UniformBox: {
                    for (double& c : cand) c = radius_ * rng.next();
                    ok = true;
                    break;
                }
            }
            if (ok) break;
        }
        coords.insert(coords.end(), cand.begin(), cand.end());
    }
    return PointSet(d_, std::move(coords));
}

SmoothnessClass Density::smoothness_class() const {
    SmoothnessClass sc;
    const double dd = static_cast<double>(d_);
    const double R = radius_;
    const double sup = family_ == DensityFamily::UniformBox
                           ? std::exp(log_prefactor_)
                           : std::exp(log_prefactor_); // density peak is at the origin
    sc.sup_density = sup;
    switch (family_) {
        case DensityFamily::TruncatedGaussian:
            sc.sigma = 2.0;
            sc.holder_constant = sup * std::sqrt(R * R * R * R + dd) / (scale_ * scale_);
            sc.boundary_hausdorff =
                dd * unit_ball_volume(d_) * std::pow(R * scale_, dd - 1.0);
            sc.c1 = sup * std::exp(-0.5 * R * R);
            break;
        case DensityFamily::TruncatedExponential:
            sc.sigma = 2.0;
            sc.holder_constant = dd * sup;
            sc.boundary_hausdorff =
                (std::sqrt(dd) / std::tgamma(dd) + dd) * std::pow(R, dd - 1.0);
            sc.c1 = sup * std::exp(-R);
            break;
        case DensityFamily::TruncatedLaplace:
            sc.sigma = 1.0;
            sc.holder_constant = std::sqrt(dd) * sup;
            sc.boundary_hausdorff = std::pow(2.0, dd) * std::sqrt(dd) *
                                    std::pow(R, dd - 1.0) / std::tgamma(dd);
            sc.c1 = sup * std::exp(-R);
            break;
        case DensityFamily::TruncatedCauchy:
            sc.sigma = 2.0;
            sc.holder_constant =
                (dd + 1.0) * sup * std::sqrt(R * R * R * R * (dd + 1.0) * (dd + 3.0) + dd);
            sc.boundary_hausdorff = dd * unit_ball_volume(d_) * std::pow(R, dd - 1.0);
            sc.c1 = sup * std::pow(1.0 + R * R, -0.5 * (dd + 1.0));
            break;
        case DensityFamily::UniformBox:
            sc.sigma = 2.0;
            sc.holder_constant = 0.0;
            sc.boundary_hausdorff = 2.0 * dd * std::pow(R, dd - 1.0);
            sc.c1 = sup;
            break;
    }
    sc.c0 = 1.0;
    return sc;
}

std::pair<double, double> Density::support_range_x1() const {
    const double ext = shape_extent(family_, radius_, scale_);
    switch (shape_of(family_)) {
        case SupportShape::Ball: return {-ext, ext};
        case SupportShape::Simplex: return {0.0, ext};
        case SupportShape::CrossPolytope: return {-ext, ext};
        case SupportShape::Box: return {0.0, ext};
    }
    return {0.0, 0.0};
}

std::pair<double, double> Density::support_range_x2(double x1) const {
    const double ext = shape_extent(family_, radius_, scale_);
    switch (shape_of(family_)) {
        case SupportShape::Ball: {
            const double rem = std::max(0.0, ext * ext - x1 * x1);
            const double h = std::sqrt(rem);
            return {-h, h};
        }
        case SupportShape::Simplex: {
            const double h = std::max(0.0, ext - x1);
            return {0.0, h};
        }
        case SupportShape::CrossPolytope: {
            const double h = std::max(0.0, ext - std::fabs(x1));
            return {-h, h};
        }
        case SupportShape::Box: return {0.0, ext};
    }
    return {0.0, 0.0};
}

std::vector<double> Density::axis_kinks() const {
    if (family_ == DensityFamily::TruncatedLaplace) return {0.0};
    return {};
}

bool Density::support_subset_of(const Density& outer) const {
    if (d_ != outer.d_) return false;
    const double dd = static_cast<double>(d_);
    const SupportShape si = shape_of(family_);
    const SupportShape so = shape_of(outer.family_);
    const double ei = shape_extent(family_, radius_, scale_);
    const double eo = shape_extent(outer.family_, outer.radius_, outer.scale_);
    // Largest coordinate sum / abs-sum / norm attained on the inner shape.
    auto max_norm = [&] {
        switch (si) {
            case SupportShape::Ball: return ei;
            case SupportShape::Simplex: return ei;
            case SupportShape::CrossPolytope: return ei;
            case SupportShape::Box: return ei * std::sqrt(dd);
        }
        return ei;
    };
    auto has_negative = [&] {
        return si == SupportShape::Ball || si == SupportShape::CrossPolytope;
    };
    switch (so) {
        case SupportShape::Ball:
            return max_norm() <= eo;
        case SupportShape::Simplex:
            if (has_negative()) return false;
            return (si == SupportShape::Box ? dd * ei : ei) <= eo;
        case SupportShape::CrossPolytope:
            switch (si) {
                case SupportShape::Ball: return ei * std::sqrt(dd) <= eo;
                case SupportShape::Simplex: return ei <= eo;
                case SupportShape::CrossPolytope: return ei <= eo;
                case SupportShape::Box: return dd * ei <= eo;
            }
            return false;
        case SupportShape::Box:
            if (has_negative()) return false;
            return ei <= eo; // simplex or box of extent ei fits in [0,eo]^d
    }
    return false;
}

namespace {

// Integrand value f(p, q) with the q -> 0 limits that arise when the
// second support ends inside the first (only for functionals that stay
// finite there).
double f_integrand(const FunctionalSpec& spec, double s, double t) {
    if (spec.arity() == 1) return f_value(spec, s);
    if (t > 0.0) return f_value(spec, s, t);
    switch (spec.kind) {
        case FunctionalKind::ReverseKL: return 0.0;                 // r log r -> 0
        case FunctionalKind::JensenShannon: return std::log(2.0);   // (r+1)log(2/(r+1)) -> log 2
        case FunctionalKind::L2Squared: return s;
        case FunctionalKind::Hellinger: return 2.0;
        case FunctionalKind::ChiSquared: return -1.0;
        case FunctionalKind::NNClassification: return 1.0;
        case FunctionalKind::RenyiDivergence:
            if (spec.alpha < 1.0) return 0.0;
            break;
        default:
            break;
    }
    throw std::domain_error("oracle-undefined: " + spec.name() +
                            " requires q > 0 on supp(p)");
}

bool requires_q_support(const FunctionalSpec& spec) {
    switch (spec.kind) {
        case FunctionalKind::KL:
        case FunctionalKind::GeneralizedBetaDivergence:
            return true;
        case FunctionalKind::RenyiDivergence:
            return spec.alpha > 1.0;
        default:
            return false;
    }
}

std::vector<double> merge_breakpoints(std::vector<double> pts, double lo, double hi) {
    std::vector<double> out{lo, hi};
    for (double p : pts)
        if (p > lo && p < hi) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

TruthValue true_functional(const FunctionalSpec& spec, const Density& p, const Density* q,
                           const OracleSettings& settings) {
    spec.validate();
    if (spec.arity() == 2) {
        if (!q) throw std::invalid_argument("true_functional: q required for arity 2");
        if (q->dim() != p.dim())
            throw std::invalid_argument("true_functional: dimension mismatch");
        if (requires_q_support(spec) && !p.support_subset_of(*q))
            throw std::domain_error("oracle-undefined: supp(p) not contained in supp(q) for " +
                                    spec.name());
    }
    const std::size_t d = p.dim();
    OracleMethod method = settings.method;
    if (method == OracleMethod::Auto)
        method = d <= 2 ? OracleMethod::Quadrature : OracleMethod::MonteCarlo;
    if (method == OracleMethod::Quadrature && d > 2)
        throw std::invalid_argument("true_functional: quadrature oracle limited to d <= 2");

    TruthValue out;
    if (method == OracleMethod::MonteCarlo) {
        // Importance sampling from p itself: T_f = E_{X~p} f(p(X), q(X)).
        const PointSet draws = p.sample(settings.mc_draws, settings.mc_seed);
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            const auto x = draws.row(i);
            const double s = p.pdf(x);
            const double t = q ? q->pdf(x) : 0.0;
            const double v = f_integrand(spec, s, t);
            const double delta = v - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (v - mean);
        }
        const double n = static_cast<double>(draws.size());
        out.value = mean;
        out.stderr_ = std::sqrt(m2 / (n - 1.0) / n);
        out.oracle = "monte-carlo";
        return out;
    }

    auto point_value = [&](std::span<const double> x) {
        const double s = p.pdf(x);
        if (s <= 0.0) return 0.0;
        const double t = q ? q->pdf(x) : 0.0;
        return f_integrand(spec, s, t) * s;
    };

    const auto [lo, hi] = p.support_range_x1();
    std::vector<double> kinks = p.axis_kinks();
    if (q) {
        const auto kq = q->axis_kinks();
        kinks.insert(kinks.end(), kq.begin(), kq.end());
        const auto [qlo, qhi] = q->support_range_x1();
        kinks.push_back(qlo);
        kinks.push_back(qhi);
    }

    if (d == 1) {
        auto f1 = [&](double x) { return point_value(std::span<const double>(&x, 1)); };
        auto res = integrate_segments(f1, merge_breakpoints(kinks, lo, hi),
                                      settings.quad_tol);
        if (!res.converged)
            throw std::runtime_error("true_functional: quadrature did not converge "
                                     "(achieved error " + std::to_string(res.error) + ")");
        out.value = res.value;
        out.stderr_ = res.error;
        out.oracle = "quadrature";
        return out;
    }

    // d == 2: outer over x1, inner over the x2 section of supp(p).
    const double inner_tol = 0.25 * settings.quad_tol / std::max(1.0, hi - lo);
    bool inner_ok = true;
    auto outer = [&](double x1) {
        auto [ylo, yhi] = p.support_range_x2(x1);
        if (!(yhi > ylo)) return 0.0;
        std::vector<double> ybp = kinks;
        if (q) {
            const auto [qylo, qyhi] = q->support_range_x2(x1);
            ybp.push_back(qylo);
            ybp.push_back(qyhi);
        }
        auto f2 = [&](double x2) {
            const double xy[2] = {x1, x2};
            return point_value(std::span<const double>(xy, 2));
        };
        auto res = integrate_segments(f2, merge_breakpoints(ybp, ylo, yhi), inner_tol);
        inner_ok = inner_ok && res.converged;
        return res.value;
    };
    auto res = integrate_segments(outer, merge_breakpoints(kinks, lo, hi),
                                  0.5 * settings.quad_tol);
    if (!res.converged || !inner_ok)
        throw std::runtime_error("true_functional: quadrature did not converge "
                                 "(achieved error " + std::to_string(res.error) + ")");
    out.value = res.value;
    out.stderr_ = res.error;
    out.oracle = "quadrature";
    return out;
}

double integrate_pdf(const Density& p, double tol) {
    const std::size_t d = p.dim();
    if (d > 2) throw std::invalid_argument("integrate_pdf: d <= 2 only");
    const auto [lo, hi] = p.support_range_x1();
    const auto kinks = p.axis_kinks();
    if (d == 1) {
        auto f1 = [&](double x) { return p.pdf(std::span<const double>(&x, 1)); };
        return integrate_segments(f1, merge_breakpoints(kinks, lo, hi), tol).value;
    }
    const double inner_tol = 0.25 * tol / std::max(1.0, hi - lo);
    auto outer = [&](double x1) {
        auto [ylo, yhi] = p.support_range_x2(x1);
        if (!(yhi > ylo)) return 0.0;
        auto f2 = [&](double x2) {
            const double xy[2] = {x1, x2};
            return p.pdf(std::span<const double>(xy, 2));
        };
        return integrate_segments(f2, merge_breakpoints(kinks, ylo, yhi), inner_tol).value;
    };
    return integrate_segments(outer, merge_breakpoints(kinks, lo, hi), 0.5 * tol).value;
}

namespace {

// Minimal RFC-4180 field handling: names like gen-entropy:2,0.5 carry
// commas and are quoted on write.
std::vector<std::string> split_csv_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

} // namespace

std::vector<GoldenValue> load_golden_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open golden-value file: " + path);
    std::vector<GoldenValue> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_fields(line);
        if (f.size() != 7)
            throw std::runtime_error(path + ": expected 7 golden-value fields, got " +
                                     std::to_string(f.size()));
        GoldenValue g;
        g.functional = f[0];
        g.density1 = f[1];
        g.density2 = f[2];
        g.d = static_cast<std::size_t>(std::stoul(f[3]));
        g.value = std::stod(f[4]);
        g.tolerance = std::stod(f[5]);
        g.oracle = f[6];
        rows.push_back(std::move(g));
    }
    return rows;
}

void save_golden_values(const std::vector<GoldenValue>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write golden-value file: " + path);
    out << "functional,density1,density2,d,value,tolerance,oracle\n";
    char buf[64];
    for (const auto& g : rows) {
        out << csv_quote(g.functional) << ',' << csv_quote(g.density1) << ','
            << csv_quote(g.density2) << ',' << g.d << ',';
        std::snprintf(buf, sizeof buf, "%.17g", g.value);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.3g", g.tolerance);
        out << buf << ',' << g.oracle << '\n';
    }
}

} // namespace knnfe
