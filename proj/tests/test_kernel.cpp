#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "generators.hpp"
#include "sobconst/kernel.hpp"

using namespace sobconst;
using doctest::Approx;

namespace {

// Direct integration in t, independent of the log-substitution used by the library.
double oracle_green(double r, const GreenKernelParams& kp) {
    const auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double log_v = (0.5 * kp.alpha - 1.0) * std::log(t) - 0.5 * kp.d * std::min(std::log(t), 0.0) -
                             kp.a * t - kp.b * r * r / t;
        return std::exp(log_v);
    };
    boost::math::quadrature::tanh_sinh<double> inner;
    boost::math::quadrature::exp_sinh<double> outer;
    const double v = inner.integrate(f, 0.0, 1.0, 1e-13) + outer.integrate(f, 1.0, HUGE_VAL, 1e-13);
    return v / std::tgamma(0.5 * kp.alpha);
}

GroupGeometry geometry(int d, double b, double D) {
    GroupGeometry g;
    g.d = d;
    g.b = b;
    g.D = D;
    return g;
}

}  // namespace

TEST_CASE("green kernel against frozen values") {
    const GreenKernelParams kp{1.0, 3, 1.0, 1.0};
    CHECK(green_kernel_upper(1.0, kp) == Approx(0.202037916872645).epsilon(1e-8));
    CHECK(green_kernel_upper(2.0, kp) == Approx(0.0186199990924388).epsilon(1e-8));
    CHECK_THROWS_AS(green_kernel_upper(0.0, kp), DomainError);
    CHECK_THROWS_AS(green_kernel_upper(1.0, GreenKernelParams{3.0, 3, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(green_kernel_upper(1.0, GreenKernelParams{1.0, 3, 0.5, 1.0}), DomainError);
}

TEST_CASE("green kernel against an independent quadrature") {
    gen::Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        const int d = gen::integer(rng, 1, 4);
        const GreenKernelParams kp{gen::uniform(rng, 0.05, 0.95) * d, d, gen::log_uniform(rng, 1.0, 30.0),
                                   gen::log_uniform(rng, 0.1, 4.0)};
        const double r = gen::log_uniform(rng, 1e-3, 5.0);
        CHECK(green_kernel_upper(r, kp, 1e-11) == Approx(oracle_green(r, kp)).epsilon(1e-8));
    }
}

TEST_CASE("green kernel decreases in r and in a") {
    gen::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const int d = gen::integer(rng, 1, 4);
        GreenKernelParams kp{gen::uniform(rng, 0.05, 0.95) * d, d, gen::log_uniform(rng, 1.0, 10.0), 1.0};
        const double r = gen::log_uniform(rng, 1e-3, 10.0);
        const double base = green_kernel_upper(r, kp);
        CHECK(green_kernel_upper(r * 1.05, kp) < base);
        kp.a *= 1.05;
        CHECK(green_kernel_upper(r, kp) < base);
    }
}

TEST_CASE("local and global envelope constants") {
    const GreenKernelParams kp{1.0, 3, 1.0, 1.0};
    const double local = local_bound_constant(kp);
    CHECK(std::isfinite(local));
    CHECK(local_bound_constant(kp, 1e-9) == Approx(local).epsilon(0.02));

    const GroupGeometry g = geometry(3, 4.0, 0.0);
    CHECK(tau_delta(g) == 1.0);
    const auto kd = delta_kernel_params(1.0, g);
    CHECK(kd.a == 1.0);
    const double global = global_bound_constant(kd, g);
    CHECK(std::isfinite(global));

    // normalized tail stays within 2x of its value at r = 10
    const auto profile = envelope_profile(kd, g, {10.0, 20.0, 30.0});
    for (const auto& s : profile) CHECK(s.normalized_global <= 2.0 * profile.front().normalized_global);
    CHECK(std::isnan(profile.front().normalized_local));

    GroupGeometry strict = geometry(3, 1.0, 1.0);
    GreenKernelParams below = delta_kernel_params(1.0, strict);
    below.a = 2.0;
    try {
        global_bound_constant(below, strict);
        FAIL("precondition not enforced");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("tau_delta") != std::string::npos);
    }
}

TEST_CASE("chi envelopes reduce to delta envelopes") {
    GroupGeometry g = geometry(2, 1.0, 0.5);
    g.c_delta = 0.3;
    g.c_chi = 0.3;
    const auto kd = delta_kernel_params(0.7, g);
    const auto kc = chi_kernel_params(0.7, g);
    CHECK(kd.a == kc.a);
    CHECK(global_bound_constant_chi(kc, g) == global_bound_constant(kd, g));
    CHECK(chi_global_norm(1.0, g) == tilde_k_norm(1.0, g));
    for (double c : {0.5, 1.0, 3.0}) {
        g.c_delta_chi_inv = c;
        CHECK(chi_global_norm(1.5, g) == Approx(tilde_k_norm(1.5, g)).epsilon(1e-12));
    }
}

TEST_CASE("kalpha norms") {
    RadialVolumeModel model{2, 0.0, 1.0};
    CHECK(kalpha_norms(1.0, 2, 1.0, 1.7, model).lrp_outer == 0.0);
    const auto n = kalpha_norms(1.0, 2, 0.5, 1.0, model);
    CHECK(n.l1_inner == Approx(0.5).epsilon(1e-15));
    const auto q = kalpha_norms_quadrature(1.0, 2, 0.5, 1.0, model, 1e-13);
    CHECK(q.l1_inner == Approx(n.l1_inner).epsilon(1e-10));
    CHECK(q.lrp_outer == Approx(n.lrp_outer).epsilon(1e-10));
    CHECK_THROWS_AS(kalpha_norms(1.0, 2, 0.5, 2.0, model), NumericalError);
    CHECK_THROWS_AS(kalpha_norms(1.0, 2, 1.5, 1.0, model), DomainError);

    gen::Rng rng(10);
    for (int i = 0; i < 300; ++i) {
        const int d = gen::integer(rng, 1, 5);
        const double alpha = gen::uniform(rng, 0.05, 0.95) * d;
        const double s = gen::uniform(rng, 0.01, 1.0);
        const double r = gen::uniform(rng, 1.0, 4.0);
        if (std::abs((alpha - d) * r + d) < 1e-3) continue;
        model.d = d;
        model.c_local = gen::uniform(rng, 0.5, 3.0);
        const auto c = kalpha_norms(alpha, d, s, r, model);
        const auto g = kalpha_norms_quadrature(alpha, d, s, r, model, 1e-13);
        CHECK(g.l1_inner == Approx(c.l1_inner).epsilon(1e-8));
        CHECK(g.lrp_outer == Approx(c.lrp_outer).epsilon(1e-8));
    }
}

TEST_CASE("cutoff radius") {
    const CutoffSchedule integrable{CutoffSchedule::Mode::integrable, 2.0, 4.0, 1.0, 4};
    CHECK(cutoff_s(1e-9, integrable) == Approx(1.0).epsilon(1e-12));
    CHECK(cutoff_s(1e-9, integrable) <= 1.0);
    const CutoffSchedule endpoint{CutoffSchedule::Mode::endpoint, 1.0, 1.5, 1.0, 3};
    CHECK(cutoff_s(1.0, endpoint) == 1.0);
    CHECK(cutoff_s(2.0, endpoint) == Approx(std::sqrt(0.5)).epsilon(1e-15));

    for (double t = 1e-6; t <= 1e6; t *= 1.7) {
        CHECK(cutoff_s(t, integrable) <= 1.0);
        CHECK(cutoff_s(t, endpoint) <= 1.0);
        CHECK(cutoff_linf_bound(t, integrable) == Approx(t / 2.0).epsilon(1e-9));
        CHECK(cutoff_linf_bound(t, endpoint) <= t);
    }
    const CutoffSchedule broken{CutoffSchedule::Mode::integrable, 2.0, 5.0, 1.0, 4};
    CHECK_THROWS_AS(cutoff_s(1.0, broken), DomainError);
}

TEST_CASE("weak type constant") {
    CHECK(weak_type_constant(1.0, 4.0 / 3.0, 1.0, 4) == 1.0);
    CHECK(weak_type_constant(2.0, 4.0, 1.0, 4) == Approx(std::pow(2.0, -0.25)).epsilon(1e-15));
    CHECK_THROWS_AS(weak_type_constant(2.0, 5.0, 1.0, 4), DomainError);

    const double alpha = 1.3;
    const int d = 3;
    const double p = 1.0 + 1e-6;
    const double q = 1.0 / (1.0 / p - alpha / d);
    const double q1 = 1.0 / (1.0 - alpha / d);
    CHECK(weak_type_constant(p, q, alpha, d) == Approx(weak_type_constant(1.0, q1, alpha, d)).epsilon(1e-4));
}

TEST_CASE("shell sums") {
    const GroupGeometry g = geometry(1, 4.0, 0.0);
    CHECK(tilde_k_norm(1.0, g) == Approx(0.521865938459879).epsilon(1e-13));
    const GroupGeometry tight = geometry(1, 1.0, 1.0);
    CHECK_THROWS_AS(tilde_k_norm(0.5, tight), DomainError);
    GroupGeometry slow = geometry(1, 0.0001, 0.0);
    CHECK(std::isfinite(tilde_k_norm(1.0, slow)));
}

TEST_CASE("chi-weighted local norm") {
    const RadialVolumeModel model{3, 0.0, 3.0};
    CHECK(chi_weighted_local_norm(2.0, 2.0, 3, 1.0, model) == Approx(2.0).epsilon(1e-15));
    gen::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double p = 1.0 + gen::log_uniform(rng, 0.01, 10.0);
        const double q = p * gen::uniform(rng, 1.0, 5.0);
        const int d = gen::integer(rng, 1, 5);
        const double s = gen::uniform(rng, 1.0, 3.0);
        RadialVolumeModel m{d, 0.0, gen::uniform(rng, 0.5, 3.0)};
        CHECK(chi_weighted_local_norm_quadrature(p, q, d, s, m, 1e-13) ==
              Approx(chi_weighted_local_norm(p, q, d, s, m)).epsilon(1e-8));
    }
}
