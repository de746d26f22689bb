#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "sobconst/constants.hpp"
#include "sobconst/series.hpp"

using namespace sobconst;
using doctest::Approx;

TEST_CASE("partial sums") {
    const MTSeriesSpec spec{2.0, 1.0, 1000};
    CHECK(mt_series_partial(spec, 0.0, 50) == 0.0);
    CHECK(mt_series_partial(spec, 0.1, 50) == Approx(0.349839352184363).epsilon(1e-13));
    CHECK_THROWS_AS(mt_series_partial(spec, 0.1, 1001), DomainError);
    CHECK_THROWS_AS(mt_series_partial(spec, -0.1, 10), DomainError);

    gen::Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const MTSeriesSpec s{1.0 + gen::log_uniform(rng, 0.05, 10.0), gen::log_uniform(rng, 0.2, 5.0), 400};
        const double gamma = gen::log_uniform(rng, 1e-4, 1.0) * mt_radius_closed_form(s);
        const int K = gen::integer(rng, s.start(), 300);
        const double a = mt_series_partial(s, gamma, K);
        CHECK(mt_series_partial(s, gamma, K + 1) >= a);
        CHECK(mt_series_partial(s, gamma * 1.01, K) >= a);
    }
    // log-space terms survive k up to k_max even where the sum itself would overflow
    const MTSeriesSpec wide{3.0, 2.0, 2000};
    CHECK(std::isfinite(mt_log_term(wide, 2000)));
}

TEST_CASE("ratio test sign") {
    const MTSeriesSpec spec{2.0, 1.0, 1000};
    CHECK(mt_term_ratio(spec, 0.1, 500) < 1.0);
    CHECK(mt_term_ratio(spec, 0.25, 500) > 1.0);
}

TEST_CASE("radius of convergence") {
    const double e = std::exp(1.0);
    CHECK(mt_series_radius({2.0, 1.0, 1000}) == Approx(1.0 / (2.0 * e)).epsilon(0.02));
    CHECK(mt_series_radius({2.0, 2.0, 1000}) == Approx(1.0 / (8.0 * e)).epsilon(0.02));
    CHECK(mt_series_radius({2.0, 1.0, 1000}) == Approx(gamma_one(2.0, 1.0, 1.0)).epsilon(0.02));
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (double c : {0.5, 1.0, 2.0}) {
            const MTSeriesSpec spec{p, c, 1000};
            const double scaled = mt_series_radius(spec) / mt_radius_closed_form(spec);
            CHECK(scaled >= 0.98);
            CHECK(scaled <= 1.02);
            const double r = mt_series_radius(spec);
            CHECK(mt_ratio_crossings(spec, 0.9 * r, spec.k_max) == 0);
            CHECK(mt_ratio_crossings(spec, 1.1 * r, spec.k_max) == 1);
        }
    }
    CHECK_THROWS_AS(mt_series_radius({2.0, 1.0, 4}), DomainError);
}

TEST_CASE("majorant") {
    for (double p : {1.5, 2.0, 3.0, 4.0, 7.3}) {
        for (int k = static_cast<int>(std::ceil(p - 1.0)); k <= 200; ++k) {
            const auto m = mt_majorant_check(p, k);
            CHECK(m.holds);
        }
    }
    CHECK_THROWS_AS(mt_majorant_check(4.0, 2), DomainError);
}

TEST_CASE("scaling divergence") {
    auto r = mt_scaling_divergence(2.0, 1.0, {1.0}, 2.0);
    CHECK(r.lhs == 8.0);
    CHECK(r.rhs == 8.0);
    r = mt_scaling_divergence(2.0, 1.0, {0.0, 1.0}, 2.0);
    CHECK(r.lhs == Approx(64.0 / 6.0).epsilon(1e-15));
    CHECK(r.rhs == Approx(16.0 / 6.0).epsilon(1e-15));

    gen::Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const double p = 1.0 + gen::log_uniform(rng, 0.01, 8.0);
        const double gamma = gen::log_uniform(rng, 1e-3, 10.0);
        const double sigma = 1.0 + gen::log_uniform(rng, 1e-6, 20.0);
        std::vector<double> m(static_cast<std::size_t>(gen::integer(rng, 1, 15)), 0.0);
        for (auto& v : m) v = gen::uniform(rng, 0.0, 1.0) < 0.3 ? gen::log_uniform(rng, 1e-3, 1e3) : 0.0;
        const auto d = mt_scaling_divergence(p, gamma, m, sigma);
        REQUIRE(d.lhs >= d.rhs);
        const auto one = mt_scaling_divergence(p, gamma, m, 1.0);
        REQUIRE(one.lhs == one.rhs);
    }
}
