#include "knnfe/gamma_oracle.hpp"

#include "knnfe/special.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace knnfe;

TEST_CASE("entropy expectation reduces to the digamma identity") {
    const auto entropy = FunctionalSpec::parse("entropy");
    // E[log U] = psi(3) for U ~ Gamma(3, 1), and psi(3) - H_2 + gamma = 0
    const auto r = gamma_oracle_residual(entropy, 3, 1, 1.0);
    CHECK(std::fabs(r.residual) < 1e-8);
    CHECK(r.f == 0.0);

    const auto r2 = gamma_oracle_residual(entropy, 1, 1, 0.25);
    CHECK(std::fabs(r2.residual) < 1e-8);
}

TEST_CASE("renyi-2 expectation: E[(k-1)/U] = p") {
    const auto renyi2 = FunctionalSpec::parse("renyi-entropy:2");
    const auto r = gamma_oracle_residual(renyi2, 3, 1, 5.0);
    CHECK(r.f == 5.0); // p^{alpha-1}
    CHECK(std::fabs(r.residual) < 1e-7);
}

TEST_CASE("nn classification at equal rates is one half") {
    const auto nn = FunctionalSpec::parse("nn-class");
    const auto r = gamma_oracle_residual(nn, 2, 2, 3.0, 3.0);
    CHECK(r.f == 0.5);
    CHECK(std::fabs(r.residual) < 1e-7);
}

TEST_CASE("jsd expectation vanishes at equal rates") {
    const auto jsd = FunctionalSpec::parse("jsd");
    for (std::size_t k : {std::size_t{1}, std::size_t{3}})
        for (std::size_t l : {std::size_t{2}, std::size_t{4}}) {
            const auto r = gamma_oracle_residual(jsd, k, l, 2.0, 2.0);
            CAPTURE(k);
            CAPTURE(l);
            CHECK(std::fabs(r.residual) < 1e-7);
        }
}

TEST_CASE("one configuration per catalog entry hits the identity") {
    for (const auto& spec : catalog_functionals()) {
        std::size_t k = 3, l = 4;
        if (!orders_valid(spec, k, l)) k = 4;
        REQUIRE(orders_valid(spec, k, l));
        const auto r = spec.arity() == 1 ? gamma_oracle_residual(spec, k, 1, 1.0)
                                         : gamma_oracle_residual(spec, k, l, 1.0, 4.0);
        CAPTURE(spec.name());
        CHECK(std::fabs(r.residual) <= 1e-6);
    }
}

TEST_CASE("side conditions are enforced") {
    CHECK_THROWS_AS(gamma_oracle_residual(FunctionalSpec::parse("chi2"), 2, 2, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_oracle_residual(FunctionalSpec::parse("kl"), 2, 2, -1.0, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(gamma_oracle_residual(FunctionalSpec::parse("kl"), 2, 2, 1.0),
                    std::invalid_argument); // missing q
}
