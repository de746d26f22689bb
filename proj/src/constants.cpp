#include "sobconst/constants.hpp"

#include <cmath>

namespace sobconst {

double b1_multiplier_bound(double alpha, int terms) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("b1_multiplier_bound requires alpha > 0");
    if (terms < 10) throw DomainError("b1_multiplier_bound requires terms >= 10");
    const double half = alpha / 2.0;
    // Coefficients A_j for j >= first_constant_sign all carry the sign of A_{first_constant_sign}.
    const int first_constant_sign = static_cast<int>(std::floor(1.0 + half)) + 1;
    if (terms < first_constant_sign) {
        throw NumericalError("b1_multiplier_bound: tail estimate does not converge before the "
                             "coefficients reach constant sign; increase terms");
    }
    double coeff = 1.0;
    double abs_sum = 0.0;
    double signed_sum = 1.0;  // includes A_0
    for (int j = 0; j < terms; ++j) {
        coeff *= (j - half) / (j + 1.0);
        abs_sum += std::abs(coeff);
        signed_sum += coeff;
    }
    const double tail = std::abs(signed_sum);
    const double out = 1.0 + abs_sum + tail;
    if (!std::isfinite(out)) throw NumericalError("b1_multiplier_bound: non-finite result");
    return out;
}

ConstantReport constant_report(const ExponentPair& pair) {
    ConstantReport r{pair, 0, 0, 0, 0, std::nullopt, std::nullopt};
    r.Q = Q(pair.p(), pair.q());
    r.Q_dual = Q(pair.q_conj(), pair.p_conj());
    r.S = std::min(r.Q, r.Q_dual);
    r.F = F(pair);
    if (pair.alpha() > 0.0) {
        r.E_H_tilde = lieb_upper_bound(pair);
        r.ratio_EH_over_S = *r.E_H_tilde / r.S;
    }
    return r;
}

}  // namespace sobconst
