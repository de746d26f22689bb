#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sobconst/error.hpp"

namespace sobconst {

/// Hölder conjugate p/(p-1).
template <typename Scalar>
Scalar conjugate_exponent(Scalar p) {
    if (!(p > Scalar(1)) || !std::isfinite(p)) {
        throw DomainError("conjugate exponent requires p > 1");
    }
    return p / (p - Scalar(1));
}

/// Exponents (p, q, alpha, d) tied by 1/q = 1/p - alpha/d.
///
/// q is always derived from (p, alpha, d); the conjugates p' and q' are cached at
/// construction so that dual() is an exact swap and dual(dual(x)) == x bitwise.
template <typename Scalar>
class BasicExponentPair {
public:
    BasicExponentPair(Scalar p, Scalar alpha, int d) : p_(p), alpha_(alpha), d_(d) {
        if (d < 1) throw DomainError("dimension d must be >= 1");
        if (!(p > Scalar(1)) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
        if (!(alpha >= Scalar(0))) throw DomainError("alpha must be >= 0");
        const Scalar inv_q = Scalar(1) / p - alpha / Scalar(d);
        if (!(inv_q > Scalar(0))) throw DomainError("alpha must be < d/p (q would be infinite)");
        q_ = alpha == Scalar(0) ? p : Scalar(1) / inv_q;
        p_conj_ = conjugate_exponent(p_);
        q_conj_ = conjugate_exponent(q_);
    }

    Scalar p() const { return p_; }
    Scalar q() const { return q_; }
    Scalar alpha() const { return alpha_; }
    int d() const { return d_; }
    Scalar p_conj() const { return p_conj_; }
    Scalar q_conj() const { return q_conj_; }

    /// (q', p', alpha, d); the scaling relation is invariant under this involution.
    BasicExponentPair dual() const {
        BasicExponentPair out = *this;
        out.p_ = q_conj_;
        out.q_ = p_conj_;
        out.p_conj_ = q_;
        out.q_conj_ = p_;
        return out;
    }

    /// |1/q - 1/p + alpha/d|
    Scalar scaling_residual() const {
        return std::abs(Scalar(1) / q_ - Scalar(1) / p_ + alpha_ / Scalar(d_));
    }

    friend bool operator==(const BasicExponentPair&, const BasicExponentPair&) = default;

private:
    Scalar p_;
    Scalar alpha_;
    int d_;
    Scalar q_{};
    Scalar p_conj_{};
    Scalar q_conj_{};
};

using ExponentPair = BasicExponentPair<double>;

std::ostream& operator<<(std::ostream& os, const ExponentPair& pair);

/// Pair from (p, alpha, d); throws DomainError when alpha >= d/p.
inline ExponentPair sobolev_pair(double p, double alpha, int d) { return {p, alpha, d}; }

/// Pair from (p, q, d) with alpha = d (1/p - 1/q).
ExponentPair pair_from_pq(double p, double q, int d);

/// Geometry constants of the group and its sub-Riemannian structure.
struct GroupGeometry {
    int d = 1;                     ///< local dimension
    double D = 1.0;                ///< exponential volume growth rate
    double b = 1.0;                ///< Gaussian decay of the heat kernel
    double c_heat = 1.0;           ///< heat-kernel prefactor
    double c_delta = 0.0;          ///< c(delta)
    double c_chi = 0.0;            ///< c(chi)
    double c_delta_chi_inv = 0.0;  ///< c(delta chi^-1)

    double b0() const { return std::sqrt(b) / 2.0; }
    void validate() const;
};

/// max{(2/b)(2D + b0)^2 - c(delta)^2/4, 1}
double tau_delta(const GroupGeometry& g);

/// max{(2/b)(c(delta chi^-1) + 2D + b0)^2 - c(chi)^2/4, 1}
double tau_chi(const GroupGeometry& g);

/// s(chi) = exp(c(chi delta^-1)); >= 1.
double s_chi(double c_chi_delta_inv);

/// Sweep specification. alpha_fractions are alpha * p / d, strictly inside (0, 1).
struct ParameterGrid {
    std::vector<double> p_values;
    std::vector<double> alpha_fractions;
    std::vector<int> d_values;
};

/// Cartesian product sorted lexicographically in (d, p, alpha).
std::vector<ExponentPair> make_grid(const ParameterGrid& spec);

/// 13 p-values geometric in p-1 over [0.05, 15], fractions 0.1..0.9, d in {1,2,3,4}.
ParameterGrid default_grid();

/// Insert midpoints: geometric in p-1, arithmetic in the fractions. d_values unchanged.
ParameterGrid refine_grid(const ParameterGrid& grid);

/// `n` points with p-1 geometric in [lo-1, hi-1].
std::vector<double> geometric_p_values(double lo, double hi, int n);

/// `key = value` lines; '#' starts a comment. Throws ConfigError on malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Comma-separated decimals ("1.5, 2, 3").
std::vector<double> parse_number_list(const std::string& value);

/// Key-value text (`key = a, b, c`, '#' comments) into a grid; missing keys keep `base`.
ParameterGrid parse_grid_config(const std::string& text, ParameterGrid base = default_grid());

/// Stable 64-bit FNV-1a fingerprint, hex encoded.
std::string fingerprint(const std::string& text);

/// Canonical text form of a grid (17 significant digits), used for hashing.
std::string canonical_string(const ParameterGrid& grid);
std::string canonical_string(const GroupGeometry& g);

}  // namespace sobconst
