#pragma once

#include <vector>

#include "sobconst/params.hpp"

namespace sobconst {

/// Parameters of the subordinated integrand
/// t^{alpha/2-1} (1 ∧ t)^{-d/2} e^{-a t} e^{-b r^2 / t} / Gamma(alpha/2).
struct GreenKernelParams {
    double alpha = 1.0;
    int d = 1;
    double a = 1.0;  ///< tau + c^2/4, at least 1
    double b = 1.0;

    void validate() const;
};

/// Radial stand-in for the group measure: density c_local d r^{d-1} on the unit ball,
/// shell masses bounded by c_local e^{D 2^{k+1}} on 2^k <= r < 2^{k+1}.
struct RadialVolumeModel {
    int d = 1;
    double D = 0.0;
    double c_local = 1.0;

    double density(double r) const;
    double shell_mass_bound(int k) const;
};

/// Cut-off radius s(t) from the weak-type argument.
struct CutoffSchedule {
    enum class Mode { integrable, endpoint };
    Mode mode = Mode::integrable;
    double p_t = 2.0;  ///< must be 1 in endpoint mode
    double q_t = 4.0;
    double alpha = 1.0;
    int d = 4;

    void validate() const;
};

/// Kernel parameters for the delta-measure: a = tau_delta + c(delta)^2 / 4.
GreenKernelParams delta_kernel_params(double alpha, const GroupGeometry& g);

/// Kernel parameters for mu_chi: a = tau_chi + c(chi)^2 / 4.
GreenKernelParams chi_kernel_params(double alpha, const GroupGeometry& g);

/// log of green_kernel_upper; stays finite where the value itself underflows.
double log_green_kernel_upper(double r, const GreenKernelParams& kp, double rel_tol = 1e-8);

/// Upper envelope of the Bessel-Green kernel at radius r > 0.
double green_kernel_upper(double r, const GreenKernelParams& kp, double rel_tol = 1e-8);

/// sup over a log grid of r in [1e-4, 1] (200 points) of green(r) r^{d-alpha} (d-alpha)/alpha.
double local_bound_constant(const GreenKernelParams& kp, double rel_tol = 1e-8);

/// sup over r in [1, 30] (120 log-spaced points) of green(r) e^{(2D + b0) r}.
/// Throws DomainError unless a >= (2/b)(2D + b0)^2, the bound tau_delta guarantees.
double global_bound_constant(const GreenKernelParams& kp, const GroupGeometry& g, double rel_tol = 1e-8);

/// Character-weighted variant: decay rate 2D + c(delta chi^-1) + b0, threshold from tau_chi.
double global_bound_constant_chi(const GreenKernelParams& kp, const GroupGeometry& g,
                                 double rel_tol = 1e-8);

/// One row of the envelope profile emitted by the CLI.
struct EnvelopeSample {
    double r;
    double green;
    double normalized_local;   ///< green r^{d-alpha} (d-alpha)/alpha, NaN for r > 1
    double normalized_global;  ///< green e^{(2D+b0) r}, NaN for r < 1
};

std::vector<EnvelopeSample> envelope_profile(const GreenKernelParams& kp, const GroupGeometry& g,
                                             const std::vector<double>& radii, double rel_tol = 1e-8);

/// Young-inequality norms of the truncated Riesz-type kernel |x|^{alpha-d} 1_{B_1}.
struct KAlphaNorms {
    double l1_inner;   ///< c_local s^alpha / alpha
    double lrp_outer;  ///< ( c_local d (s^E - 1) / ((d-alpha) r - d) )^{1/r}, E = (alpha-d) r + d
};

KAlphaNorms kalpha_norms(double alpha, int d, double s, double r_exp, const RadialVolumeModel& model);

/// Same quantities by adaptive quadrature of the radial integrals.
KAlphaNorms kalpha_norms_quadrature(double alpha, int d, double s, double r_exp,
                                    const RadialVolumeModel& model, double rel_tol = 1e-12);

double cutoff_s(double t, const CutoffSchedule& sched);

/// L-infinity factor of f * K^{(2)}_{alpha, s(t)} per unit ||f||: equals t/2 in integrable
/// mode, s(t)^{alpha-d} (at most t for t >= 2) in endpoint mode, 0 when s(t) = 1.
double cutoff_linf_bound(double t, const CutoffSchedule& sched);

/// Weak-type (p_t, q_t) constant with the group constant C set to 1.
double weak_type_constant(double p_t, double q_t, double alpha, int d);

/// sum_{k>=0} exp(-r (2D + b0) 2^k + D 2^{k+1})
double tilde_k_norm(double r_exp, const GroupGeometry& g);

/// L^r norm of the chi-weighted local kernel (C := 1):
/// (s_factor/(p-1)) [c_local (1 + q/p') / d]^{1/q + 1/p'}.
double chi_weighted_local_norm(double p, double q, int d, double s_factor, const RadialVolumeModel& model);

/// Same quantity by quadrature of the radial integral.
double chi_weighted_local_norm_quadrature(double p, double q, int d, double s_factor,
                                          const RadialVolumeModel& model, double rel_tol = 1e-12);

/// Shell sum for the chi-weighted global kernel; the character weight cancels the extra decay.
double chi_global_norm(double r_exp, const GroupGeometry& g);

}  // namespace sobconst
