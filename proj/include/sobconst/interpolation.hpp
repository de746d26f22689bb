#pragma once

#include <cmath>
#include <numbers>

#include "sobconst/params.hpp"
#include "sobconst/special.hpp"

namespace sobconst {

/// Weak-type endpoint exponents (1, q1) and (p2, q2) used to interpolate onto (p, q).
template <typename Scalar>
struct Endpoints {
    Scalar p1, q1, p2, q2;
};

template <typename Scalar>
Endpoints<Scalar> endpoints(const BasicExponentPair<Scalar>& pair) {
    if (!(pair.alpha() > Scalar(0))) throw DomainError("endpoints require alpha > 0");
    const Scalar x = pair.alpha() / Scalar(pair.d());
    const Scalar q = pair.q();
    return {Scalar(1), Scalar(1) / (Scalar(1) - x), Scalar(1) / (x + Scalar(1) / (q + Scalar(1))),
            q + Scalar(1)};
}

/// (1 - 1/p) / (1 - alpha/d - 1/(q+1))
template <typename Scalar>
Scalar theta(const BasicExponentPair<Scalar>& pair) {
    if (!(pair.alpha() > Scalar(0))) throw DomainError("theta requires alpha > 0");
    const Scalar denom =
        Scalar(1) - pair.alpha() / Scalar(pair.d()) - Scalar(1) / (pair.q() + Scalar(1));
    if (!(denom > Scalar(0))) throw NumericalError("theta: non-positive denominator");
    return (Scalar(1) - Scalar(1) / pair.p()) / denom;
}

/// Weak (1, q1) norm alpha^{-(1 - alpha/d)}.
template <typename Scalar>
Scalar m1(Scalar alpha, int d) {
    using std::pow;
    if (!(alpha > Scalar(0) && alpha < Scalar(d))) throw DomainError("m1 requires 0 < alpha < d");
    return pow(alpha, -(Scalar(1) - alpha / Scalar(d)));
}

template <typename Scalar>
Scalar log_m2(const BasicExponentPair<Scalar>& pair) {
    using std::log;
    if (!(pair.alpha() > Scalar(0))) throw DomainError("m2 requires alpha > 0");
    const Scalar alpha = pair.alpha();
    const Scalar d = Scalar(pair.d());
    const Scalar x = alpha / d;
    const Scalar inv_q1 = Scalar(1) / (pair.q() + Scalar(1));
    const Scalar z = x + inv_q1;
    const Scalar outer_exp = Scalar(1) / (Scalar(1) + d / (alpha * (pair.q() + Scalar(1)))) - x;
    return x * log(d) - log(alpha) + (x / z) * log(x) +
           outer_exp * log((Scalar(1) - x - inv_q1) * (pair.q() + Scalar(1)));
}

/// Weak (p2, q2) norm.
template <typename Scalar>
Scalar m2(const BasicExponentPair<Scalar>& pair) {
    using std::exp;
    return exp(log_m2(pair));
}

/// Marcinkiewicz prefactor q (p2/p)^{q2/p2} / (q2 - q) + (q / p^{q1}) / (q - q1).
template <typename Scalar>
Scalar m0(const BasicExponentPair<Scalar>& pair, const Endpoints<Scalar>& ep) {
    using std::exp;
    using std::log;
    const Scalar p = pair.p();
    const Scalar q = pair.q();
    if (!(ep.q1 < q && q < ep.q2)) throw NumericalError("m0: q outside (q1, q2)");
    const Scalar first = exp(log(q) + (ep.q2 / ep.p2) * log(ep.p2 / p) - log(ep.q2 - q));
    const Scalar second = exp(log(q) - ep.q1 * log(p) - log(q - ep.q1));
    return first + second;
}

/// C(p, q) = p^{-p'q/(q+p')} (1 + p'/q)
template <typename Scalar>
Scalar marcinkiewicz_c(const BasicExponentPair<Scalar>& pair) {
    using std::pow;
    const Scalar pc = pair.p_conj();
    const Scalar q = pair.q();
    return pow(pair.p(), -pc * q / (q + pc)) * (Scalar(1) + pc / q);
}

/// Everything produced by one Marcinkiewicz assembly, with the proof's bounds alongside.
template <typename Scalar>
struct BasicMarcinkiewiczData {
    BasicExponentPair<Scalar> pair;
    Scalar p1{}, q1{}, p2{}, q2{};
    Scalar theta{};
    Scalar M0{}, M1{}, M2{};
    Scalar assembled{};      ///< M0^{1/q} M1^{1-theta} M2^theta
    Scalar ipq_rhs_shape{};  ///< ((d - alpha)/alpha) p' q^{1 - 1/p}
    Scalar ratio{};          ///< assembled / ipq_rhs_shape

    Scalar m1_bound{};        ///< d / alpha
    Scalar m0_bound{};        ///< e q + C(p, q)
    Scalar m2_theta{};        ///< M2^theta
    Scalar m2_theta_bound{};  ///< 2 d^theta (q/p)^{1-1/p} alpha^{-theta}
    Scalar final_bound{};     ///< 2 d alpha^{-1} (e q + C(p,q))^{1/q} (q/p)^{1-1/p}
};

using MarcinkiewiczData = BasicMarcinkiewiczData<double>;

template <typename Scalar>
BasicMarcinkiewiczData<Scalar> assemble(const BasicExponentPair<Scalar>& pair) {
    using std::exp;
    using std::log;
    using std::pow;
    const auto ep = endpoints(pair);
    const Scalar th = theta(pair);
    const Scalar alpha = pair.alpha();
    const Scalar d = Scalar(pair.d());
    const Scalar p = pair.p();
    const Scalar q = pair.q();
    const Scalar e = std::numbers::e_v<Scalar>;

    BasicMarcinkiewiczData<Scalar> out{.pair = pair};
    out.p1 = ep.p1;
    out.q1 = ep.q1;
    out.p2 = ep.p2;
    out.q2 = ep.q2;
    out.theta = th;
    out.M0 = m0(pair, ep);
    out.M1 = m1(alpha, pair.d());
    const Scalar lm2 = log_m2(pair);
    out.M2 = exp(lm2);
    out.assembled = exp(log(out.M0) / q + (Scalar(1) - th) * log(out.M1) + th * lm2);
    out.ipq_rhs_shape = (d - alpha) / alpha * pair.p_conj() * pow(q, Scalar(1) - Scalar(1) / p);
    out.ratio = out.assembled / out.ipq_rhs_shape;
    if (!std::isfinite(out.ratio)) throw NumericalError("assemble: non-finite ratio");

    const Scalar c_pq = marcinkiewicz_c(pair);
    out.m1_bound = d / alpha;
    out.m0_bound = e * q + c_pq;
    out.m2_theta = exp(th * lm2);
    out.m2_theta_bound = Scalar(2) * pow(d, th) * pow(q / p, Scalar(1) - Scalar(1) / p) * pow(alpha, -th);
    out.final_bound = Scalar(2) * d / alpha * pow(e * q + c_pq, Scalar(1) / q) *
                      pow(q / p, Scalar(1) - Scalar(1) / p);
    return out;
}

/// u^{1 - pt/qt} (1 + u^{pt'})^{-(1/pt')(1 - pt/qt)}, evaluated in log space.
template <typename Scalar>
Scalar weak_sup_objective(Scalar u, Scalar p_t, Scalar q_t) {
    using std::exp;
    using std::log;
    const Scalar pc = conjugate_exponent(p_t);
    const Scalar gap = Scalar(1) - p_t / q_t;
    const Scalar lu = log(u);
    return exp(gap * lu - gap / pc * softplus(pc * lu));
}

/// sup_{u > 0} of weak_sup_objective: log-spaced scan of [1e-6, 1e9] (10^4 points) refined
/// by golden-section search around the best sample. Analytically the supremum is 1.
double weak_sup_factor(double p_t, double q_t);

}  // namespace sobconst
