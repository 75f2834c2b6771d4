#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace knnfe {

enum class FunctionalKind {
    Entropy,
    RenyiEntropy,          // alpha
    GeneralizedEntropy,    // alpha, beta
    KL,
    GeneralizedBetaDivergence, // beta
    ReverseKL,
    JensenShannon,
    L2Squared,
    RenyiDivergence,       // alpha
    Hellinger,
    ChiSquared,
    NNClassification,
};

/// Target functional T_f together with its parameters. `arity` is 1 for
/// single-density functionals (entropies) and 2 for divergences.
struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::Entropy;
    double alpha = 0.0;
    double beta = 0.0;

    int arity() const;

    /// Throws std::invalid_argument when the parameters violate the
    /// catalog's validity rules (e.g. Renyi order alpha >= 0, alpha != 1).
    void validate() const;

    /// Canonical configuration name, e.g. "renyi-div:3".
    std::string name() const;

    /// Parses the configuration names accepted by the CLI:
    ///   entropy, renyi-entropy:<a>, gen-entropy:<a>,<b>, kl, gen-beta:<b>,
    ///   reverse-kl, jsd, l2sq, renyi-div:<a>, hellinger, chi2, nn-class
    static FunctionalSpec parse(const std::string& name);
};

FunctionalSpec make_functional(FunctionalKind kind, double alpha = 0.0, double beta = 0.0);

/// Order side conditions from the estimator-function tables
/// (e.g. reverse-kl needs l >= 2, chi2 needs l >= 3). Throws on violation.
void check_orders(const FunctionalSpec& spec, std::size_t k, std::size_t l = 1);

/// True when (k,l) satisfies the side conditions without throwing.
bool orders_valid(const FunctionalSpec& spec, std::size_t k, std::size_t l = 1);

/// The integrand f: f(p) for arity 1, f(p,q) for arity 2. Arguments must
/// be positive.
double f_value(const FunctionalSpec& spec, double p,
               std::optional<double> q = std::nullopt);

/// Estimator function phi_k(u) of a single-density functional. The value
/// is defined for u > 0; u == 0 is allowed only where the closed form is
/// finite there.
double phi_single(const FunctionalSpec& spec, std::size_t k, double u);

/// Estimator function phi_{k,l}(u,v) of a two-density functional.
double phi_two(const FunctionalSpec& spec, std::size_t k, std::size_t l, double u, double v);

/// Unchecked evaluations used by the estimator hot path: the order side
/// conditions must already hold, domain checks are skipped, and IEEE
/// infinities/NaNs are returned as-is.
double phi_single_raw(const FunctionalSpec& spec, std::size_t k, double u);
double phi_two_raw(const FunctionalSpec& spec, std::size_t k, std::size_t l, double u,
                   double v);

/// Finite signed sum c_{k,l} from the Jensen-Shannon estimator function:
/// sum over j in {0..k+l-2}\{l-1} of C(k+l-2,j) (-1)^j / (l-1-j).
double jsd_coefficient_c(std::size_t k, std::size_t l);

/// Piecewise power envelope eta_{a,b}(u): u^a on (0,1], u^b on (1,inf).
double eta(double a, double b, double u);

/// Tail envelope |phi| <~ eta_{a,b}(u) * eta_{a~,b~}(v). `paper_stated`
/// marks exponents taken from the catalog's analysis; the rest are fitted
/// from the closed forms.
struct TailEnvelope {
    double a = 0.0;
    double b = 0.0;
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    bool two_density = false;
    bool paper_stated = true;
};

/// Envelope exponents for a catalog entry. `epsilon` is the small
/// positive constant standing in for the arbitrarily-small exponent of
/// log-type functionals; pass 0 for the limiting exponents used by the
/// rate calculators.
TailEnvelope tail_envelope(const FunctionalSpec& spec, std::size_t k, std::size_t l = 1,
                           double epsilon = 0.01);

/// Theorem-side constraints on the envelope: a > -k for the single-sample
/// consistency theorem, a >= -k/2 and a~ >= -l/2 for the two-sample one.
struct EnvelopeValidity {
    bool single_ok = true;
    bool two_ok = true;
};
EnvelopeValidity envelope_validity(const TailEnvelope& env, std::size_t k, std::size_t l);

/// One representative FunctionalSpec per catalog entry (parameters chosen
/// as in the worked examples); drives the oracle and envelope sweeps.
std::vector<FunctionalSpec> catalog_functionals();

} // namespace knnfe
