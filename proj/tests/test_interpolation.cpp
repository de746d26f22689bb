#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "sobconst/constants.hpp"
#include "sobconst/interpolation.hpp"

using namespace sobconst;
using doctest::Approx;

namespace {
const ExponentPair kRef = sobolev_pair(2.0, 1.0, 4);
}

TEST_CASE("endpoints and theta at the reference pair") {
    const auto ep = endpoints(kRef);
    CHECK(ep.p1 == 1.0);
    CHECK(ep.q1 == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(ep.p2 == Approx(20.0 / 9.0).epsilon(1e-15));
    CHECK(ep.q2 == Approx(5.0).epsilon(1e-15));
    CHECK(theta(kRef) == Approx(10.0 / 11.0).epsilon(1e-15));
    CHECK_THROWS_AS(endpoints(sobolev_pair(2.0, 0.0, 4)), DomainError);
}

TEST_CASE("Marcinkiewicz constants") {
    CHECK(m1(1.0, 4) == 1.0);
    CHECK(m1(0.5, 2) == Approx(std::pow(0.5, -0.75)).epsilon(1e-15));
    CHECK(m1(2.0, 4) == Approx(std::pow(2.0, -0.5)).epsilon(1e-15));

    CHECK(m2(kRef) == Approx(0.891821155246625).epsilon(1e-12));
    const double hand = 4.0 * std::pow(10.0 / 9.0, 9.0 / 4.0) + (4.0 / std::pow(2.0, 4.0 / 3.0)) / (8.0 / 3.0);
    CHECK(m0(kRef, endpoints(kRef)) == Approx(hand).epsilon(1e-13));
    CHECK(m0(kRef, endpoints(kRef)) == Approx(5.66534994303297).epsilon(1e-12));

    const auto data = assemble(kRef);
    CHECK(data.assembled == Approx(1.39028762836105).epsilon(1e-12));
    CHECK(data.ratio == Approx(0.115857302363421).epsilon(1e-12));

    // finite right up to the alpha -> d/p boundary
    CHECK(std::isfinite(m2(sobolev_pair(2.0, 1.999999, 4))));
}

TEST_CASE("assembly identities and proof bounds on random pairs") {
    gen::Rng rng(6);
    for (int i = 0; i < 5000; ++i) {
        const auto x = gen::pair(rng, 6);
        const auto m = assemble(x);
        const double p = x.p();
        const double q = x.q();
        REQUIRE(m.theta > 0.0);
        REQUIRE(m.theta < 1.0);
        CHECK(std::abs(1.0 / p - ((1.0 - m.theta) / m.p1 + m.theta / m.p2)) * p <= 1e-10);
        CHECK(std::abs(1.0 / q - ((1.0 - m.theta) / m.q1 + m.theta / m.q2)) * q <= 1e-10);
        CHECK(m.M1 <= m.m1_bound);
        CHECK(m.M0 <= m.m0_bound);
        CHECK(m.m2_theta <= m.m2_theta_bound);
        CHECK(m.assembled <= m.final_bound);
    }
}

TEST_CASE("weak sup factor") {
    CHECK(weak_sup_factor(2.0, 4.0) == Approx(1.0).epsilon(1e-6));
    CHECK(weak_sup_factor(1.1, 20.0) == Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(weak_sup_factor(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(weak_sup_factor(3.0, 2.0), DomainError);

    gen::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const double pt = 1.0 + gen::log_uniform(rng, 0.01, 20.0);
        const double qt = pt * (1.0 + gen::log_uniform(rng, 0.01, 100.0));
        const double v = weak_sup_factor(pt, qt);
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= 1.0 - 1e-6);
        for (double u = 1e-6; u < 1e9; u *= 3.7) CHECK(weak_sup_objective(u, pt, qt) <= 1.0 + 1e-12);
    }
}
