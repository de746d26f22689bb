#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "sobconst/params.hpp"
#include "sobconst/special.hpp"

namespace sobconst {

/// Q(p, q) = q^{1 - 1/p} / (p - 1), for 1 < p <= q.
template <typename Scalar>
Scalar Q(Scalar p, Scalar q) {
    if (!(p > Scalar(1)) || !(q >= p)) throw DomainError("Q(p, q) requires 1 < p <= q");
    using std::pow;
    return pow(q, Scalar(1) - Scalar(1) / p) / (p - Scalar(1));
}

/// S(p, q) = min(Q(p, q), Q(q', p')).
template <typename Scalar>
Scalar S(const BasicExponentPair<Scalar>& pair) {
    return std::min(Q(pair.p(), pair.q()), Q(pair.q_conj(), pair.p_conj()));
}

/// S on bare exponents; alpha/d is implied by 1/p - 1/q.
template <typename Scalar>
Scalar S(Scalar p, Scalar q) {
    return std::min(Q(p, q), Q(conjugate_exponent(q), conjugate_exponent(p)));
}

namespace detail {

template <typename Scalar>
Scalar F_impl(Scalar p, Scalar q, Scalar p_conj, Scalar q_conj) {
    using std::pow;
    return Scalar(1) / (Scalar(1) / p_conj + Scalar(1) / q) / (p * q_conj) *
           (pow(p_conj, Scalar(1) / q) + pow(q, Scalar(1) / p_conj));
}

}  // namespace detail

/// F(p, q) = [1/(1/p' + 1/q)] [1/(p q')] (p'^{1/q} + q^{1/p'}); invariant under (p,q) -> (q',p').
template <typename Scalar>
Scalar F(Scalar p, Scalar q) {
    if (!(p > Scalar(1)) || !(q >= p)) throw DomainError("F(p, q) requires 1 < p <= q");
    return detail::F_impl(p, q, conjugate_exponent(p), conjugate_exponent(q));
}

template <typename Scalar>
Scalar F(const BasicExponentPair<Scalar>& pair) {
    return detail::F_impl(pair.p(), pair.q(), pair.p_conj(), pair.q_conj());
}

/// log of the surface measure of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
template <typename Scalar>
Scalar log_sphere_area(int d) {
    using std::log;
    const Scalar half_d = Scalar(d) / Scalar(2);
    return log(Scalar(2)) + half_d * log(std::numbers::pi_v<Scalar>) - log_gamma(half_d);
}

/// Lieb-type upper bound for the homogeneous embedding constant, evaluated in log space.
template <typename Scalar>
Scalar log_lieb_upper_bound(const BasicExponentPair<Scalar>& pair) {
    using std::log;
    const Scalar alpha = pair.alpha();
    if (!(alpha > Scalar(0))) throw DomainError("lieb_upper_bound requires alpha > 0");
    const int d = pair.d();
    const Scalar x = alpha / Scalar(d);
    const Scalar pc = pair.p_conj();
    const Scalar q = pair.q();
    const Scalar e = Scalar(1) / pc + Scalar(1) / q;
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    return -alpha * log(two_pi) + log_gamma((Scalar(d) - alpha) / Scalar(2)) -
           log_gamma(alpha / Scalar(2)) + log(Scalar(d) / alpha) +
           (Scalar(1) - x) * (log_sphere_area<Scalar>(d) - log(Scalar(d)) + log(Scalar(1) - x)) -
           log(pair.p() * pair.q_conj()) + log_add_exp(e * log(pc), e * log(q));
}

template <typename Scalar>
Scalar lieb_upper_bound(const BasicExponentPair<Scalar>& pair) {
    using std::exp;
    return exp(log_lieb_upper_bound(pair));
}

/// [e (cp a1 (p' - 1))^{p'} p']^{-1}
template <typename Scalar>
Scalar gamma_one(Scalar p, Scalar cp, Scalar a1) {
    using std::exp;
    using std::log;
    if (!(cp >= Scalar(1))) throw DomainError("gamma_one requires C_p >= 1");
    if (!(a1 > Scalar(0))) throw DomainError("gamma_one requires A1 > 0");
    const Scalar pc = conjugate_exponent(p);
    return exp(-(Scalar(1) + pc * log(cp * a1 * (pc - Scalar(1))) + log(pc)));
}

/// [e (a2 s^2 / (p - 1))^{p'}]^{-1}
template <typename Scalar>
Scalar gamma_two(Scalar p, Scalar a2, Scalar s) {
    using std::exp;
    using std::log;
    if (!(a2 > Scalar(0))) throw DomainError("gamma_two requires A2 > 0");
    if (!(s >= Scalar(1))) throw DomainError("gamma_two requires s(chi) >= 1");
    const Scalar pc = conjugate_exponent(p);
    return exp(-(Scalar(1) + pc * log(a2 * s * s / (p - Scalar(1)))));
}

/// (s / (p - 1)) (1 + q/p')^{1/q + 1/p'}
template <typename Scalar>
Scalar a2_bound_factor(Scalar p, Scalar q, Scalar s) {
    using std::pow;
    if (!(q >= p)) throw DomainError("a2_bound_factor requires p <= q");
    if (!(s >= Scalar(1))) throw DomainError("a2_bound_factor requires s >= 1");
    const Scalar pc = conjugate_exponent(p);
    return s / (p - Scalar(1)) * pow(Scalar(1) + q / pc, Scalar(1) / q + Scalar(1) / pc);
}

/// Total-variation bound 1 + sum_{j>=1} |A_j| for the multiplier Delta^{a/2}(I+Delta)^{-a/2},
/// A_j the Taylor coefficients of (1-t)^{alpha/2}.
///
/// The first `terms` coefficients are summed directly. Past j > 1 + alpha/2 the coefficients
/// share one sign and sum_{j>=0} A_j = 0, so the remaining tail equals |sum_{j<=terms} A_j|.
double b1_multiplier_bound(double alpha, int terms = 64);

/// Closed-form constants attached to one exponent pair.
struct ConstantReport {
    ExponentPair pair;
    double S = 0;
    double Q = 0;
    double Q_dual = 0;
    double F = 0;
    std::optional<double> E_H_tilde;  ///< only when alpha > 0
    std::optional<double> ratio_EH_over_S;
};

ConstantReport constant_report(const ExponentPair& pair);

/// Empirical stand-in for a group-dependent constant (A1, B3, Ipq C, ...).
struct FittedConstant {
    std::string name;
    double value = 0;
    std::string grid_hash;
    double tolerance = 0;
};

}  // namespace sobconst
