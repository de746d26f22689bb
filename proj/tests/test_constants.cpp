#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "sobconst/constants.hpp"
#include "sobconst/special.hpp"

using namespace sobconst;
using doctest::Approx;

TEST_CASE("log_gamma") {
    CHECK(log_gamma(0.5) == Approx(0.5723649429247001).epsilon(1e-14));
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);

    gen::Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double x = gen::log_uniform(rng, 1e-6, 1e6);
        CHECK(log_gamma(x) == Approx(std::lgamma(x)).epsilon(1e-13).scale(1.0));
    }
    // reflection branch
    for (double x : {0.1, 0.25, 0.3, 0.49}) {
        CHECK(log_gamma(x) + log_gamma(1.0 - x) == Approx(std::log(M_PI / std::sin(M_PI * x))).epsilon(1e-14));
    }
}

TEST_CASE("Q, S and F at hand-checked points") {
    CHECK(Q(2.0, 2.0) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(Q(2.0, 4.0) == Approx(2.0).epsilon(1e-15));
    CHECK(Q(4.0 / 3.0, 2.0) == Approx(3.0 * std::pow(2.0, 0.25)).epsilon(1e-14));

    CHECK(S(sobolev_pair(2.0, 0.0, 3)) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(S(sobolev_pair(2.0, 1.0, 4)) == Approx(2.0).epsilon(1e-15));
    CHECK(S(4.0 / 3.0, 2.0) == Approx(2.0).epsilon(1e-14));

    CHECK(F(2.0, 2.0) == Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(F(2.0, 4.0) == Approx(1.59460355750136).epsilon(1e-13));
    CHECK(F(4.0 / 3.0, 2.0) == Approx(1.59460355750136).epsilon(1e-13));
}

TEST_CASE("scalar-generic constants agree across precisions") {
    const BasicExponentPair<long double> wide(2.0L, 1.0L, 4);
    CHECK(static_cast<double>(S(wide)) == Approx(2.0).epsilon(1e-15));
    CHECK(static_cast<double>(lieb_upper_bound(wide)) == Approx(1.43657193253959).epsilon(1e-12));
    const BasicExponentPair<float> narrow(2.0f, 1.0f, 4);
    CHECK(static_cast<double>(F(narrow)) == Approx(1.59460355750136).epsilon(1e-6));
}

TEST_CASE("Lieb-type upper bound") {
    const auto pair = sobolev_pair(2.0, 1.0, 4);
    const double eh = lieb_upper_bound(pair);
    CHECK(eh == Approx(1.43657193253959).epsilon(1e-12));
    CHECK(eh / S(pair) == Approx(0.718285966269797).epsilon(1e-12));
    CHECK_THROWS_AS(lieb_upper_bound(sobolev_pair(2.0, 0.0, 4)), DomainError);

    // stays finite in log space for large d and extreme p
    CHECK(std::isfinite(log_lieb_upper_bound(sobolev_pair(1.001, 50.0, 64))));
    CHECK(std::isfinite(log_lieb_upper_bound(sobolev_pair(40.0, 0.001, 1))));
}

TEST_CASE("gamma_one, gamma_two, a2_bound_factor") {
    const double e = std::exp(1.0);
    CHECK(gamma_one(2.0, 1.0, 1.0) == Approx(1.0 / (2.0 * e)).epsilon(1e-14));
    CHECK(gamma_one(2.0, 2.0, 1.0) == Approx(1.0 / (8.0 * e)).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_one(2.0, 0.5, 1.0), DomainError);
    CHECK(gamma_two(2.0, 1.0, 1.0) == Approx(1.0 / e).epsilon(1e-14));
    CHECK(gamma_two(2.0, 1.0, std::sqrt(2.0)) == Approx(1.0 / (4.0 * e)).epsilon(1e-14));
    CHECK(a2_bound_factor(2.0, 2.0, 1.0) == Approx(2.0).epsilon(1e-15));
    CHECK(a2_bound_factor(2.0, 4.0, 1.0) == Approx(std::pow(3.0, 0.75)).epsilon(1e-14));
    CHECK_THROWS_AS(a2_bound_factor(2.0, 1.5, 1.0), DomainError);
}

TEST_CASE("b1 multiplier bound") {
    for (double alpha : {0.5, 1.0, 2.0}) CHECK(b1_multiplier_bound(alpha) == Approx(2.0).epsilon(1e-10));
    for (double alpha = 0.05; alpha <= 2.0; alpha += 0.05) {
        CHECK(b1_multiplier_bound(alpha) == Approx(2.0).epsilon(1e-10));
    }
    for (double alpha : {2.5, 3.0, 3.5, 5.0}) {
        const double b = b1_multiplier_bound(alpha);
        CHECK(std::isfinite(b));
        CHECK(b > 2.0);
    }
    // alpha = 4: (1-t)^2 = 1 - 2t + t^2
    CHECK(b1_multiplier_bound(4.0) == Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(b1_multiplier_bound(1.0, 5), DomainError);
    CHECK_THROWS_AS(b1_multiplier_bound(40.0, 12), NumericalError);
}

TEST_CASE("duality symmetry on random pairs") {
    gen::Rng rng(4);
    for (int i = 0; i < 10000; ++i) {
        const auto x = gen::pair(rng);
        const auto y = x.dual();
        REQUIRE(S(x) == Approx(S(y)).epsilon(1e-12));
        REQUIRE(F(x) == Approx(F(y)).epsilon(1e-12));
    }
}

TEST_CASE("comparability claims on random pairs") {
    gen::Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const auto x = gen::pair(rng);
        const auto r = constant_report(x);
        REQUIRE(r.F >= 0.25 * r.S);
        if (x.q() >= x.p_conj()) {
            REQUIRE(r.F <= 4.0 * r.Q);
            REQUIRE(r.F >= 0.25 * r.Q);
            REQUIRE(r.Q <= r.Q_dual);
        }
        REQUIRE(r.E_H_tilde.has_value());
        REQUIRE(std::isfinite(*r.ratio_EH_over_S));
    }
}
