#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "sobconst/params.hpp"

using namespace sobconst;
using doctest::Approx;

TEST_CASE("conjugate exponent") {
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK(conjugate_exponent(4.0) == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(conjugate_exponent(1.5) == Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(conjugate_exponent(1.0), DomainError);
    CHECK_THROWS_AS(conjugate_exponent(0.5), DomainError);
}

TEST_CASE("sobolev pair") {
    CHECK(sobolev_pair(2.0, 1.0, 4).q() == Approx(4.0).epsilon(1e-15));
    CHECK(sobolev_pair(2.0, 0.0, 3).q() == 2.0);
    CHECK(sobolev_pair(1.5, 1.0, 3).q() == Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(sobolev_pair(2.0, 2.0, 4), DomainError);
    CHECK_THROWS_AS(sobolev_pair(2.0, 3.0, 4), DomainError);
    CHECK_THROWS_AS(sobolev_pair(2.0, -0.1, 4), DomainError);
    CHECK_THROWS_AS(sobolev_pair(2.0, 0.1, 0), DomainError);

    const auto pq = pair_from_pq(2.0, 4.0, 2);
    CHECK(pq.alpha() == Approx(0.5));
    CHECK(pq.q() == Approx(4.0).epsilon(1e-14));
}

TEST_CASE("dual is an involution and preserves scaling") {
    gen::Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const auto x = gen::pair(rng);
        REQUIRE(x.dual().dual() == x);
        CHECK(x.dual().scaling_residual() <= 1e-12 * std::max(1.0, 1.0 / x.dual().p()));
        CHECK(x.dual().p() == x.q_conj());
        CHECK(x.dual().q() == x.p_conj());
    }
}

TEST_CASE("tau_delta and tau_chi") {
    GroupGeometry g;
    g.b = 4.0;
    g.D = 0.0;
    CHECK(tau_delta(g) == 1.0);
    g.D = 1.0;
    CHECK(tau_delta(g) == Approx(4.5).epsilon(1e-15));
    g.c_delta = 4.0;
    CHECK(tau_delta(g) == 1.0);

    g.c_delta = 0.0;
    g.c_delta_chi_inv = 1.0;
    CHECK(tau_chi(g) == Approx(8.0).epsilon(1e-15));

    GroupGeometry h;
    h.b = 1.0;
    h.D = 0.0;
    h.c_chi = 10.0;
    CHECK(tau_chi(h) == 1.0);

    GroupGeometry same;
    same.c_delta = 0.7;
    same.c_chi = 0.7;
    CHECK(tau_chi(same) == tau_delta(same));
}

TEST_CASE("tau_delta enables the global kernel bound") {
    gen::Rng rng(2);
    for (int i = 0; i < 2000; ++i) {
        GroupGeometry g;
        g.b = gen::log_uniform(rng, 0.05, 20.0);
        g.D = gen::uniform(rng, 0.0, 3.0);
        g.c_delta = gen::uniform(rng, 0.0, 10.0);
        const double a = tau_delta(g);
        const double shift = 2.0 * g.D + g.b0();
        CHECK(a >= 1.0);
        CHECK(a + 0.25 * g.c_delta * g.c_delta >= 2.0 / g.b * shift * shift * (1.0 - 1e-14));
    }
}

TEST_CASE("s_chi") {
    CHECK(s_chi(0.0) == 1.0);
    CHECK(s_chi(1.0) == Approx(2.718281828459045).epsilon(1e-15));
    CHECK(s_chi(std::log(2.0)) == Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(s_chi(-1.0), DomainError);
}

TEST_CASE("make_grid") {
    const auto one = make_grid({{2.0}, {0.5}, {4}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].p() == 2.0);
    CHECK(one[0].alpha() == 1.0);
    CHECK(one[0].q() == Approx(4.0));

    CHECK_THROWS_AS(make_grid({{2.0}, {0.0}, {3}}), DomainError);
    CHECK_THROWS_AS(make_grid({{}, {0.5}, {3}}), DomainError);

    const auto four = make_grid({{2.0, 1.5}, {0.5}, {3, 2}});
    REQUIRE(four.size() == 4);
    CHECK(four[0].d() == 2);
    CHECK(four[0].p() == 1.5);
    CHECK(four[1].d() == 2);
    CHECK(four[1].p() == 2.0);
    CHECK(four[2].d() == 3);
    CHECK(four[3].p() == 2.0);
}

TEST_CASE("default grid satisfies the scaling relation") {
    const auto grid = default_grid();
    CHECK(grid.p_values.size() == 13);
    CHECK(grid.p_values.front() == Approx(1.05));
    CHECK(grid.p_values.back() == Approx(16.0));
    CHECK(grid.alpha_fractions.size() == 9);
    const auto pairs = make_grid(grid);
    CHECK(pairs.size() == 13 * 9 * 4);
    for (const auto& x : pairs) CHECK(x.scaling_residual() <= 1e-12 * (1.0 / x.p()));

    const auto refined = refine_grid(grid);
    CHECK(refined.p_values.size() == 25);
    CHECK(refined.alpha_fractions.size() == 17);
    CHECK(refined.p_values[1] - 1.0 == Approx(std::sqrt((grid.p_values[0] - 1.0) * (grid.p_values[1] - 1.0))));
}

TEST_CASE("grid config parsing and fingerprint") {
    const auto g = parse_grid_config("# sweep\np_values = 3, 2\nd_values = 2\n");
    CHECK(g.p_values == std::vector<double>{2.0, 3.0});
    CHECK(g.d_values == std::vector<int>{2});
    CHECK(g.alpha_fractions == default_grid().alpha_fractions);
    CHECK_THROWS_AS(parse_grid_config("d_values = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("no equals sign\n"), ConfigError);

    CHECK(fingerprint(canonical_string(g)) == fingerprint(canonical_string(g)));
    CHECK(fingerprint(canonical_string(g)) != fingerprint(canonical_string(default_grid())));
    CHECK(fingerprint("").size() == 16);
}
