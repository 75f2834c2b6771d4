#pragma once

#include "knnfe/functionals.hpp"
#include "knnfe/point_set.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace knnfe {

enum class DensityFamily {
    TruncatedGaussian,   // standard normal restricted to ||x|| <= R, then scaled
    TruncatedExponential, // iid Exp(1) coordinates restricted to the simplex sum(x) <= R
    TruncatedLaplace,    // iid Laplace(1) restricted to sum|x_i| <= R
    TruncatedCauchy,     // spherical Cauchy restricted to ||x|| <= R
    UniformBox,          // uniform on [0, side]^d
};

/// Smoothness-class membership data: the Holder order sigma plus the
/// constants entering the density-class conditions (supremum, Holder
/// constant, boundary Hausdorff measure, and the small-density integral
/// decay pair C0, C1).
struct SmoothnessClass {
    double sigma = 2.0;
    double sup_density = 0.0;
    double holder_constant = 0.0;
    double boundary_hausdorff = 0.0;
    double c0 = 1.0;
    double c1 = 0.0;
};

/// A reference density with exact pdf evaluation, a seeded rejection
/// sampler, and class metadata. Instances are immutable.
class Density {
public:
    static Density truncated_gaussian(std::size_t d, double radius, double scale = 1.0);
    static Density truncated_exponential(std::size_t d, double radius);
    static Density truncated_laplace(std::size_t d, double radius);
    static Density truncated_cauchy(std::size_t d, double radius);
    static Density uniform_box(std::size_t d, double side);

    /// Parses the configuration names: tgauss:<R>[,scale], texp:<R>,
    /// tlaplace:<R>, tcauchy:<R>, uniform:<side>.
    static Density parse(const std::string& name, std::size_t d);

    DensityFamily family() const { return family_; }
    std::size_t dim() const { return d_; }
    double radius() const { return radius_; }
    double scale() const { return scale_; }
    std::string name() const;

    double pdf(std::span<const double> x) const;
    bool contains(std::span<const double> x) const;

    /// i.i.d. draws by rejection from the untruncated parent; identical
    /// seeds give identical point sets. Throws when the rejection
    /// acceptance probability is below 1e-6.
    PointSet sample(std::size_t m, std::uint64_t seed) const;

    SmoothnessClass smoothness_class() const;

    /// Probability that a parent draw lands inside the truncation region.
    double acceptance_probability() const;

    /// Support geometry used by the low-dimensional quadrature oracle.
    std::pair<double, double> support_range_x1() const;
    std::pair<double, double> support_range_x2(double x1) const;
    /// Interior coordinates where the pdf kinks along any axis (the
    /// Laplace |x| cusp); empty for smooth families.
    std::vector<double> axis_kinks() const;

    /// True when this support is contained in `outer`'s support
    /// (exact geometric check per family pair).
    bool support_subset_of(const Density& outer) const;

private:
    Density() = default;

    DensityFamily family_ = DensityFamily::UniformBox;
    std::size_t d_ = 1;
    double radius_ = 1.0;   // R, or the box side
    double scale_ = 1.0;    // coordinate scale (Gaussian only)
    double log_prefactor_ = 0.0;
    double acceptance_ = 1.0;
};

enum class OracleMethod {
    Auto,       // quadrature for d <= 2, Monte Carlo otherwise
    Quadrature, // d <= 2 only
    MonteCarlo,
};

struct OracleSettings {
    OracleMethod method = OracleMethod::Auto;
    double quad_tol = 1e-8;
    std::size_t mc_draws = 10'000'000;
    std::uint64_t mc_seed = 0x5eedf00dULL;
};

struct TruthValue {
    double value = 0.0;
    double stderr_ = 0.0; // MC standard error (quadrature error bound otherwise)
    std::string oracle;   // "quadrature" or "monte-carlo"
};

/// Ground truth T_f(p) or T_f(p,q) for the reference densities: adaptive
/// quadrature in d <= 2, importance-sampling Monte Carlo (drawing from p)
/// in higher dimension. Divergences whose integrand requires q > 0 on
/// supp(p) throw an oracle-undefined error when the supports violate
/// containment.
TruthValue true_functional(const FunctionalSpec& spec, const Density& p,
                           const Density* q = nullptr, const OracleSettings& settings = {});

/// Integral of the pdf over its support by quadrature; d <= 2 only.
double integrate_pdf(const Density& p, double tol = 1e-8);

/// One golden-value record: a functional/density configuration with the
/// oracle result that produced it.
struct GoldenValue {
    std::string functional;
    std::string density1;
    std::string density2; // empty for single-density functionals
    std::size_t d = 1;
    double value = 0.0;
    double tolerance = 0.0;
    std::string oracle;
};

/// CSV with header functional,density1,density2,d,value,tolerance,oracle.
std::vector<GoldenValue> load_golden_values(const std::string& path);
void save_golden_values(const std::vector<GoldenValue>& rows, const std::string& path);

} // namespace knnfe
