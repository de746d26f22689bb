#include "sobconst/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "sobconst/quadrature.hpp"
#include "sobconst/special.hpp"

namespace sobconst {

void GreenKernelParams::validate() const {
    if (d < 1) throw DomainError("kernel: d must be >= 1");
    if (!(alpha > 0.0 && alpha < d)) throw DomainError("kernel: alpha must lie in (0, d)");
    if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("kernel: a must be >= 1");
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("kernel: b must be > 0");
}

double RadialVolumeModel::density(double r) const {
    if (r < 0.0 || r > 1.0) throw DomainError("volume model density is defined on the unit ball");
    return c_local * d * std::pow(r, d - 1);
}

double RadialVolumeModel::shell_mass_bound(int k) const {
    return c_local * std::exp(D * std::ldexp(1.0, k + 1));
}

namespace {

bool satisfies_scaling(double p, double q, double alpha, int d) {
    const double residual = std::abs(1.0 / q - 1.0 / p + alpha / d);
    return residual <= 1e-10 * std::max(1.0, 1.0 / p);
}

}  // namespace

void CutoffSchedule::validate() const {
    if (d < 1) throw DomainError("cutoff: d must be >= 1");
    if (!(alpha > 0.0 && alpha < d)) throw DomainError("cutoff: alpha must lie in (0, d)");
    if (mode == Mode::endpoint) {
        if (p_t != 1.0) throw DomainError("cutoff: endpoint mode requires p_t = 1");
    } else if (!(p_t > 1.0 && q_t > p_t)) {
        throw DomainError("cutoff: integrable mode requires 1 < p_t < q_t");
    }
    if (!satisfies_scaling(p_t, q_t, alpha, d)) {
        throw DomainError("cutoff: (p_t, q_t) violates 1/q = 1/p - alpha/d");
    }
}

GreenKernelParams delta_kernel_params(double alpha, const GroupGeometry& g) {
    GreenKernelParams kp{alpha, g.d, tau_delta(g) + 0.25 * g.c_delta * g.c_delta, g.b};
    kp.validate();
    return kp;
}

GreenKernelParams chi_kernel_params(double alpha, const GroupGeometry& g) {
    GreenKernelParams kp{alpha, g.d, tau_chi(g) + 0.25 * g.c_chi * g.c_chi, g.b};
    kp.validate();
    return kp;
}

namespace {

// Integrand after t = e^s: phi(s) = (alpha/2) s - (d/2) min(s, 0) - a e^s - b r^2 e^{-s}.
// Each side of s = 0 is concave with a closed-form stationary point.
struct LogIntegrand {
    double half_alpha, half_d, a, br2;

    double operator()(double s) const {
        return half_alpha * s - half_d * std::min(s, 0.0) - a * std::exp(s) - br2 * std::exp(-s);
    }

    double stationary(double slope) const {
        // -a u^2 + slope u + b r^2 = 0, u = e^s
        const double u = (slope + std::sqrt(slope * slope + 4.0 * a * br2)) / (2.0 * a);
        return std::log(u);
    }
};

constexpr double kTruncation = 50.0;  // drop where the integrand is below e^-50 of its peak

double walk_out(const LogIntegrand& phi, double start, double direction, double floor_value) {
    double step = 1.0;
    double s = start;
    for (int i = 0; i < 200; ++i) {
        s = start + direction * step;
        if (phi(s) < floor_value) return s;
        step *= 2.0;
    }
    throw NumericalError("kernel quadrature: integrand does not decay");
}

}  // namespace

double log_green_kernel_upper(double r, const GreenKernelParams& kp, double rel_tol) {
    kp.validate();
    if (!(r > 0.0)) throw DomainError("green kernel diverges at r = 0 for alpha < d");
    const LogIntegrand phi{0.5 * kp.alpha, 0.5 * kp.d, kp.a, kp.b * r * r};

    const double left_peak = std::min(phi.stationary(0.5 * (kp.alpha - kp.d)), 0.0);
    const double right_peak = std::max(phi.stationary(0.5 * kp.alpha), 0.0);
    const double ref = std::max(phi(left_peak), phi(right_peak));
    const double floor_value = ref - kTruncation;

    std::vector<double> breaks;
    if (phi(left_peak) >= floor_value) {
        breaks.push_back(walk_out(phi, left_peak, -1.0, floor_value));
        breaks.push_back(left_peak);
        const double split = std::log(std::min(1.0, kp.b * r * r));
        if (split > breaks.front() && split < 0.0) breaks.push_back(split);
        breaks.push_back(0.0);
    }
    if (phi(right_peak) >= floor_value) {
        breaks.push_back(0.0);
        breaks.push_back(right_peak);
        breaks.push_back(walk_out(phi, right_peak, 1.0, floor_value));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const auto integrand = [&](double s) { return std::exp(phi(s) - ref); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        total += integrate(integrand, breaks[i], breaks[i + 1], rel_tol).value;
    }
    if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("kernel quadrature failed");
    return ref + std::log(total) - log_gamma(0.5 * kp.alpha);
}

double green_kernel_upper(double r, const GreenKernelParams& kp, double rel_tol) {
    return std::exp(log_green_kernel_upper(r, kp, rel_tol));
}

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

double global_sup(const GreenKernelParams& kp, double decay, double rel_tol) {
    double best = 0.0;
    for (double r : log_spaced(1.0, 30.0, 120)) {
        best = std::max(best, std::exp(log_green_kernel_upper(r, kp, rel_tol) + decay * r));
    }
    if (!std::isfinite(best)) throw NumericalError("global kernel bound is not finite");
    return best;
}

void require_threshold(const GreenKernelParams& kp, double shift, const char* tau_name) {
    const double threshold = 2.0 / kp.b * shift * shift;
    if (kp.a < threshold * (1.0 - 1e-12)) {
        throw DomainError(std::string("global kernel bound needs a >= (2/b)(shift)^2; choose a from ") +
                          tau_name + " (a = " + std::to_string(kp.a) +
                          ", threshold = " + std::to_string(threshold) + ")");
    }
}

}  // namespace

double local_bound_constant(const GreenKernelParams& kp, double rel_tol) {
    kp.validate();
    const double norm = (kp.d - kp.alpha) / kp.alpha;
    double best = 0.0;
    for (double r : log_spaced(1e-4, 1.0, 200)) {
        const double v = std::exp(log_green_kernel_upper(r, kp, rel_tol) + (kp.d - kp.alpha) * std::log(r)) * norm;
        best = std::max(best, v);
    }
    if (!std::isfinite(best)) throw NumericalError("local kernel bound is not finite");
    return best;
}

double global_bound_constant(const GreenKernelParams& kp, const GroupGeometry& g, double rel_tol) {
    kp.validate();
    g.validate();
    const double shift = 2.0 * g.D + g.b0();
    require_threshold(kp, shift, "tau_delta");
    return global_sup(kp, shift, rel_tol);
}

double global_bound_constant_chi(const GreenKernelParams& kp, const GroupGeometry& g, double rel_tol) {
    kp.validate();
    g.validate();
    const double shift = g.c_delta_chi_inv + 2.0 * g.D + g.b0();
    require_threshold(kp, shift, "tau_chi");
    return global_sup(kp, shift, rel_tol);
}

std::vector<EnvelopeSample> envelope_profile(const GreenKernelParams& kp, const GroupGeometry& g,
                                             const std::vector<double>& radii, double rel_tol) {
    kp.validate();
    const double shift = 2.0 * g.D + g.b0();
    const double nan = std::nan("");
    std::vector<EnvelopeSample> out;
    out.reserve(radii.size());
    for (double r : radii) {
        const double lg = log_green_kernel_upper(r, kp, rel_tol);
        EnvelopeSample s{r, std::exp(lg), nan, nan};
        if (r <= 1.0) s.normalized_local = std::exp(lg + (kp.d - kp.alpha) * std::log(r)) * (kp.d - kp.alpha) / kp.alpha;
        if (r >= 1.0) s.normalized_global = std::exp(lg + shift * r);
        out.push_back(s);
    }
    return out;
}

namespace {

void validate_kalpha(double alpha, int d, double s, double r_exp) {
    if (d < 1 || !(alpha > 0.0 && alpha < d)) throw DomainError("kalpha_norms requires 0 < alpha < d");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("kalpha_norms requires s in (0, 1]");
    if (!(r_exp >= 1.0)) throw DomainError("kalpha_norms requires r >= 1");
    if (std::abs((alpha - d) * r_exp + d) < 1e-12) {
        throw NumericalError("kalpha_norms: degenerate exponent (alpha - d) r + d = 0");
    }
}

}  // namespace

KAlphaNorms kalpha_norms(double alpha, int d, double s, double r_exp, const RadialVolumeModel& model) {
    validate_kalpha(alpha, d, s, r_exp);
    const double e = (alpha - d) * r_exp + d;
    KAlphaNorms out{};
    out.l1_inner = model.c_local * std::pow(s, alpha) / alpha;
    if (s == 1.0) {
        out.lrp_outer = 0.0;
    } else {
        const double powered = model.c_local * d * std::expm1(e * std::log(s)) / ((d - alpha) * r_exp - d);
        out.lrp_outer = std::pow(powered, 1.0 / r_exp);
    }
    return out;
}

KAlphaNorms kalpha_norms_quadrature(double alpha, int d, double s, double r_exp,
                                    const RadialVolumeModel& model, double rel_tol) {
    validate_kalpha(alpha, d, s, r_exp);
    KAlphaNorms out{};
    // Inner: (1/d) int_0^s r^{alpha-d} c d r^{d-1} dr with r = s e^{-x}.
    const double x_max = 45.0 / alpha;
    out.l1_inner = integrate([&](double x) { return model.c_local * std::pow(s * std::exp(-x), alpha); },
                             0.0, x_max, rel_tol)
                       .value;
    // Outer: int_s^1 r^{(alpha-d) r_exp} c d r^{d-1} dr.
    const double e = (alpha - d) * r_exp + d;
    const double outer = integrate([&](double r) { return model.c_local * d * std::pow(r, e - 1.0); }, s, 1.0, rel_tol)
                             .value;
    out.lrp_outer = s == 1.0 ? 0.0 : std::pow(outer, 1.0 / r_exp);
    return out;
}

double cutoff_s(double t, const CutoffSchedule& sched) {
    sched.validate();
    if (!(t > 0.0)) throw DomainError("cutoff_s requires t > 0");
    if (sched.mode == CutoffSchedule::Mode::endpoint) {
        if (t < 2.0) return 1.0;
        return std::exp(std::log1p(t / 2.0) / (sched.alpha - sched.d));
    }
    const double pc = conjugate_exponent(sched.p_t);
    const double e = (sched.alpha - sched.d) * pc + sched.d;
    const double log_bracket = softplus(std::log(sched.d * pc / sched.q_t) + pc * std::log(t / 2.0));
    return std::exp(log_bracket / e);
}

double cutoff_linf_bound(double t, const CutoffSchedule& sched) {
    const double s = cutoff_s(t, sched);
    if (s >= 1.0) return 0.0;
    if (sched.mode == CutoffSchedule::Mode::endpoint) return std::pow(s, sched.alpha - sched.d);
    const double pc = conjugate_exponent(sched.p_t);
    const double e = (sched.alpha - sched.d) * pc + sched.d;
    return std::exp((std::log(sched.q_t / (sched.d * pc)) + std::log(std::expm1(e * std::log(s)))) / pc);
}

double weak_type_constant(double p_t, double q_t, double alpha, int d) {
    if (d < 1 || !(alpha > 0.0 && alpha < d)) throw DomainError("weak_type_constant requires 0 < alpha < d");
    if (!(p_t >= 1.0) || !(q_t > p_t)) throw DomainError("weak_type_constant requires 1 <= p_t < q_t");
    if (!satisfies_scaling(p_t, q_t, alpha, d)) {
        throw DomainError("weak_type_constant: 1/q = 1/p - alpha/d violated");
    }
    if (p_t == 1.0) return std::pow(alpha, -1.0 / q_t);
    const double pc = conjugate_exponent(p_t);
    return std::pow(alpha, p_t * alpha / d - 1.0) * std::pow(q_t / (d * pc), (p_t - 1.0) * alpha / d);
}

namespace {

double shell_sum(double decay_per_unit, double growth) {
    // sum_k exp(-decay 2^k + growth 2^{k+1})
    if (!(decay_per_unit > 2.0 * growth)) throw NumericalError("shell sum diverges: decay does not beat growth");
    double sum = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double scale = std::ldexp(1.0, k);
        const double term = std::exp(-decay_per_unit * scale + growth * 2.0 * scale);
        sum += term;
        if (term < 1e-18 * std::max(sum, 1e-300) || term == 0.0) return sum;
    }
    throw NumericalError("shell sum did not converge");
}

}  // namespace

double tilde_k_norm(double r_exp, const GroupGeometry& g) {
    g.validate();
    if (!(r_exp >= 1.0)) throw DomainError("tilde_k_norm requires r >= 1");
    return shell_sum(r_exp * (2.0 * g.D + g.b0()), g.D);
}

double chi_global_norm(double r_exp, const GroupGeometry& g) {
    g.validate();
    if (!(r_exp >= 1.0)) throw DomainError("chi_global_norm requires r >= 1");
    const double c = g.c_delta_chi_inv;
    // kernel decay r (2D + c + b0) less the character weight r c on each shell
    return shell_sum(r_exp * (2.0 * g.D + c + g.b0()) - r_exp * c, g.D);
}

namespace {

void validate_chi_local(double p, double q, int d, double s_factor) {
    if (!(p > 1.0 && q >= p) || !std::isfinite(q)) throw DomainError("chi_weighted_local_norm requires 1 < p <= q");
    if (d < 1) throw DomainError("chi_weighted_local_norm requires d >= 1");
    if (!(s_factor >= 1.0)) throw DomainError("chi_weighted_local_norm requires s_factor >= 1");
}

}  // namespace

double chi_weighted_local_norm(double p, double q, int d, double s_factor, const RadialVolumeModel& model) {
    validate_chi_local(p, q, d, s_factor);
    const double pc = conjugate_exponent(p);
    const double inv_r = 1.0 / q + 1.0 / pc;
    return s_factor / (p - 1.0) * std::pow(model.c_local * (1.0 + q / pc) / d, inv_r);
}

double chi_weighted_local_norm_quadrature(double p, double q, int d, double s_factor,
                                          const RadialVolumeModel& model, double rel_tol) {
    validate_chi_local(p, q, d, s_factor);
    const double pc = conjugate_exponent(p);
    const double r = 1.0 / (1.0 / q + 1.0 / pc);
    // int_0^1 u^{(d/p - d) r} c u^{d-1} du with u = e^{-x}
    const double e = (static_cast<double>(d) / p - d) * r + d;
    const double x_max = 45.0 / e;
    const double integral =
        integrate([&](double x) { return model.c_local * std::exp(-e * x); }, 0.0, x_max, rel_tol).value;
    return s_factor / (p - 1.0) * std::pow(integral, 1.0 / r);
}

}  // namespace sobconst
