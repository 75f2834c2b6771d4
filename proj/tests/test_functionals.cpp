#include "knnfe/functionals.hpp"

#include "knnfe/special.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

using namespace knnfe;

TEST_CASE("functional names parse and round-trip") {
    const char* names[] = {"entropy", "renyi-entropy:2", "gen-entropy:2,0.5",
                           "kl", "gen-beta:3", "reverse-kl", "jsd", "l2sq",
                           "renyi-div:3", "hellinger", "chi2", "nn-class"};
    for (const char* n : names) {
        const auto spec = FunctionalSpec::parse(n);
        CHECK(spec.name() == n);
        CHECK(FunctionalSpec::parse(spec.name()).kind == spec.kind);
    }
    CHECK_THROWS_AS(FunctionalSpec::parse("unknown"), std::invalid_argument);
    CHECK_THROWS_AS(FunctionalSpec::parse("renyi-entropy"), std::invalid_argument);
    CHECK_THROWS_AS(FunctionalSpec::parse("renyi-entropy:1"), std::invalid_argument);
    CHECK_THROWS_AS(FunctionalSpec::parse("gen-entropy:2,-1"), std::invalid_argument);
    CHECK_THROWS_AS(FunctionalSpec::parse("renyi-div:abc"), std::invalid_argument);
}

TEST_CASE("integrand values") {
    CHECK(f_value(FunctionalSpec::parse("kl"), 2.0, 2.0) == 0.0);
    CHECK(f_value(FunctionalSpec::parse("nn-class"), 1.0, 1.0) == 0.5);
    CHECK(f_value(FunctionalSpec::parse("entropy"), std::exp(1.0)) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(f_value(FunctionalSpec::parse("hellinger"), 1.0, 4.0) ==
          doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(f_value(FunctionalSpec::parse("jsd"), 3.0, 3.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(f_value(FunctionalSpec::parse("entropy"), 0.0), std::domain_error);
    CHECK_THROWS_AS(f_value(FunctionalSpec::parse("kl"), 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(f_value(FunctionalSpec::parse("kl"), 1.0), std::domain_error);
}

TEST_CASE("phi for single-density functionals") {
    const auto entropy = FunctionalSpec::parse("entropy");
    CHECK(phi_single(entropy, 2, 1.0) ==
          doctest::Approx(euler_gamma - 1.0).epsilon(1e-14));
    CHECK(phi_single(entropy, 1, 1.0) == doctest::Approx(euler_gamma).epsilon(1e-14));

    const auto renyi2 = FunctionalSpec::parse("renyi-entropy:2");
    CHECK(phi_single(renyi2, 3, 2.0) == doctest::Approx(1.0).epsilon(1e-14)); // (k-1)/u

    const auto gen = FunctionalSpec::parse("gen-entropy:2,1");
    CHECK(phi_single(gen, 3, 0.5) == 0.0); // below the indicator threshold
    // at u = beta exactly, (u-beta)^(k-alpha) = 0^1 = 0
    CHECK(phi_single(gen, 3, 1.0) == 0.0);

    CHECK_THROWS_AS(phi_single(FunctionalSpec::parse("renyi-entropy:3"), 2, 1.0),
                    std::invalid_argument); // k <= alpha-1
    CHECK_THROWS_AS(phi_single(entropy, 2, 0.0), std::domain_error); // log 0
    CHECK_THROWS_AS(phi_single(entropy, 2, -1.0), std::domain_error);
    CHECK_THROWS_AS(phi_single(FunctionalSpec::parse("kl"), 2, 1.0),
                    std::invalid_argument); // arity mismatch
}

TEST_CASE("phi for two-density functionals") {
    const auto kl = FunctionalSpec::parse("kl");
    CHECK(phi_two(kl, 4, 4, 2.5, 2.5) == 0.0);
    CHECK(phi_two(kl, 2, 3, 1.0, 2.0) ==
          doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-14)); // log 2 + 1 - 3/2

    const auto chi2 = FunctionalSpec::parse("chi2");
    // direct evaluation of the closed form (l-1)(l-2)/((k+1)k) (u/v)^2 - 1
    CHECK(phi_two(chi2, 1, 3, 2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(phi_two(chi2, 1, 3, 1.0, 2.0) == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK_THROWS_AS(phi_two(chi2, 1, 2, 1.0, 1.0), std::invalid_argument);

    const auto hellinger = FunctionalSpec::parse("hellinger");
    // independent log-gamma evaluation of 2(1 - G(k)G(l)/(G(k+1/2)G(l-1/2)))
    const double expected =
        2.0 * (1.0 - std::exp(2.0 * std::lgamma(2.0) - std::lgamma(2.5) - std::lgamma(1.5)));
    CHECK(phi_two(hellinger, 2, 2, 0.7, 0.7) == doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(phi_two(FunctionalSpec::parse("reverse-kl"), 2, 1, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(phi_two(FunctionalSpec::parse("l2sq"), 1, 3, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(phi_two(kl, 2, 2, -1.0, 1.0), std::domain_error);
}

TEST_CASE("KL phi antisymmetry") {
    const auto kl = FunctionalSpec::parse("kl");
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uu(0.05, 20.0);
    for (int i = 0; i < 200; ++i) {
        const std::size_t k = 1 + rng() % 6;
        const std::size_t l = 1 + rng() % 6;
        const double u = uu(rng);
        const double v = uu(rng);
        CHECK(phi_two(kl, k, l, u, v) ==
              doctest::Approx(-phi_two(kl, l, k, v, u)).epsilon(1e-12));
    }
}

namespace {

// Brute-force c_{k,l} with exact integer binomials (Pascal's triangle),
// independent of the log-gamma route in the implementation.
double c_oracle(std::size_t k, std::size_t l) {
    const std::size_t n = k + l - 2;
    std::vector<std::vector<double>> pas(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        pas[i].assign(i + 1, 1.0);
        for (std::size_t j = 1; j < i; ++j) pas[i][j] = pas[i - 1][j - 1] + pas[i - 1][j];
    }
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j + 1 == l) continue;
        const double sign = (j % 2 != 0) ? -1.0 : 1.0;
        sum += pas[n][j] * sign /
               (static_cast<double>(l) - 1.0 - static_cast<double>(j));
    }
    return sum;
}

} // namespace

TEST_CASE("jsd coefficient c_{k,l} against a brute-force oracle") {
    CHECK(jsd_coefficient_c(1, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(jsd_coefficient_c(2, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(jsd_coefficient_c(1, 3) == doctest::Approx(c_oracle(1, 3)).epsilon(1e-13));
    CHECK(c_oracle(1, 3) == doctest::Approx(-1.5).epsilon(1e-14));
    for (std::size_t k = 1; k <= 8; ++k)
        for (std::size_t l = 1; l <= 8; ++l)
            CHECK(jsd_coefficient_c(k, l) ==
                  doctest::Approx(c_oracle(k, l)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("tail envelopes match the catalog") {
    const double eps = 0.01;
    const auto ent = tail_envelope(FunctionalSpec::parse("entropy"), 3, 1, eps);
    CHECK(ent.a == -eps);
    CHECK(ent.b == eps);
    CHECK(ent.paper_stated);

    const auto rd3 = tail_envelope(FunctionalSpec::parse("renyi-div:3"), 4, 4, eps);
    CHECK(rd3.a == -2.0);
    CHECK(rd3.b == -2.0);
    CHECK(rd3.a_tilde == 2.0);
    CHECK(rd3.b_tilde == 2.0);

    const auto hel = tail_envelope(FunctionalSpec::parse("hellinger"), 2, 2, eps);
    CHECK(hel.a == 0.5);
    CHECK(hel.a_tilde == -0.5);

    const auto jsd = tail_envelope(FunctionalSpec::parse("jsd"), 2, 3, eps);
    CHECK_FALSE(jsd.paper_stated);

    // theorem-side constraints
    const auto l2 = tail_envelope(FunctionalSpec::parse("l2sq"), 2, 3, eps);
    CHECK(envelope_validity(l2, 2, 4).two_ok);
    CHECK_FALSE(envelope_validity(l2, 2, 3).two_ok); // a~ = -2 < -3/2
    CHECK(envelope_validity(ent, 1, 1).single_ok);   // -eps > -1
}

TEST_CASE("envelope soundness: a finite constant C bounds |phi| on the test box") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> logu(std::log(1e-4), std::log(1e4));
    for (const auto& spec : catalog_functionals()) {
        std::size_t k = 3, l = 4;
        if (!orders_valid(spec, k, l)) k = 4;
        REQUIRE(orders_valid(spec, k, l));
        const auto env = tail_envelope(spec, k, l);
        double c_fit = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double u = std::exp(logu(rng));
            const double v = std::exp(logu(rng));
            double numer, denom;
            if (spec.arity() == 1) {
                numer = std::fabs(phi_single_raw(spec, k, u));
                denom = eta(env.a, env.b, u);
            } else {
                numer = std::fabs(phi_two_raw(spec, k, l, u, v));
                denom = eta(env.a, env.b, u) * eta(env.a_tilde, env.b_tilde, v);
            }
            REQUIRE(std::isfinite(numer));
            c_fit = std::max(c_fit, numer / denom);
        }
        CAPTURE(spec.name());
        CHECK(std::isfinite(c_fit));
        CHECK(c_fit < 1e9);
    }
}
