#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "sobconst/error.hpp"

namespace sobconst {

namespace detail {

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficients).
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace detail

/// ln Gamma(x) for x > 0. Lanczos series for x >= 1/2, reflection below.
template <typename Scalar>
Scalar log_gamma(Scalar x) {
    using std::log;
    using std::sin;
    if (!(x > Scalar(0)) || !std::isfinite(x)) throw DomainError("log_gamma requires x > 0");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    if (x < Scalar(0.5)) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return log(pi / sin(pi * x)) - log_gamma(Scalar(1) - x);
    }
    const Scalar z = x - Scalar(1);
    Scalar series = Scalar(detail::kLanczosCoeff[0]);
    for (std::size_t i = 1; i < detail::kLanczosCoeff.size(); ++i) {
        series += Scalar(detail::kLanczosCoeff[i]) / (z + Scalar(i));
    }
    const Scalar t = z + Scalar(detail::kLanczosG) + Scalar(0.5);
    return Scalar(0.5) * log(Scalar(2) * pi) + (z + Scalar(0.5)) * log(t) - t + log(series);
}

/// log(exp(a) + exp(b)) without overflow.
template <typename Scalar>
Scalar log_add_exp(Scalar a, Scalar b) {
    using std::exp;
    using std::log1p;
    if (a < b) std::swap(a, b);
    return a + log1p(exp(b - a));
}

/// log(1 + exp(x)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar x) {
    using std::exp;
    using std::log1p;
    return x > Scalar(0) ? x + log1p(exp(-x)) : log1p(exp(x));
}

}  // namespace sobconst
