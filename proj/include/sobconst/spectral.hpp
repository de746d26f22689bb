#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "sobconst/params.hpp"

namespace sobconst {

/// Periodic box [-L/2, L/2)^dim sampled at n points per axis, x_j = (j - n/2) L / n.
struct TorusGrid {
    int dim = 1;
    int n = 128;
    double box_length = 16.0;

    void validate() const;
    Eigen::Index total_points() const;
    double spacing() const { return box_length / n; }
    double cell_volume() const;
};

/// Grid values stored with the last axis contiguous.
struct SpectralField {
    TorusGrid grid;
    Eigen::ArrayXcd values;
};

struct TrialFamily {
    enum class Kind { gaussian, bump, plane_wave_modulated };
    Kind kind = Kind::gaussian;
    std::vector<double> widths;
};

std::string to_string(TrialFamily::Kind kind);
TrialFamily::Kind parse_trial_kind(const std::string& name);

/// Sample one family member of width w on the grid.
SpectralField trial_member(TrialFamily::Kind kind, double width, const TorusGrid& grid);

SpectralField constant_field(const TorusGrid& grid, double value);

/// Unnormalized forward DFT along every axis.
Eigen::ArrayXcd forward_transform(const SpectralField& f);
/// Inverse of forward_transform (includes the 1/N).
SpectralField inverse_transform(const TorusGrid& grid, const Eigen::ArrayXcd& coefficients);

/// |sum |f|^2 - sum |F|^2 / N| / sum |f|^2
double parseval_defect(const SpectralField& f);

/// Squared angular frequencies |2 pi k / L|^2 at every coefficient index.
Eigen::ArrayXd frequency_norm2(const TorusGrid& grid);

/// Fourier multiplier (tau + |2 pi k / L|^2)^{alpha/2}. alpha = 0 returns f unchanged.
SpectralField bessel_apply(const SpectralField& f, double tau, double alpha);

/// Riemann sum (sum |f|^p h^dim)^{1/p}.
double lp_norm(const SpectralField& f, double p);

/// ||f||_q / ||(tau + L)^{alpha/2} f||_p. Requires pair.d() == grid dim.
double embedding_ratio(const SpectralField& f, const ExponentPair& pair, double tau);

struct EmbeddingRow {
    TrialFamily::Kind kind;
    double width;
    ExponentPair pair;
    double ratio;
    double ratio_over_S;
};

struct EmbeddingSweep {
    std::vector<EmbeddingRow> rows;
    double fitted_A = 0;  ///< max of ratio / S over the rows
};

EmbeddingSweep embedding_sweep(const TrialFamily& family, const std::vector<ExponentPair>& pairs, double tau,
                               const TorusGrid& grid);

/// Riemann sum of the Taylor tail exp(gamma |f|^{p'}) - sum_{0 <= k < p-1} (gamma |f|^{p'})^k / k!.
double mt_functional(const SpectralField& f, double gamma, double p);

/// Number of integers k with 0 <= k < p - 1.
int mt_tail_start(double p);

struct InterpolationCheck {
    double lhs;
    double rhs;
    double ratio;
};

/// lhs = ||B_{theta alpha} f||_p, rhs = ||f||_p^{1-theta} ||B_alpha f||_p^theta with B_s = (tau + L)^{s/2}.
InterpolationCheck interpolation_check(const SpectralField& f, double p, double alpha, double theta, double tau);

struct GagliardoCheck {
    double lhs;        ///< ||f||_q
    double rhs_shape;  ///< S(p,q) ||B_{d/p} f||_p^{1-p/q} ||f||_p^{p/q}
};

GagliardoCheck gagliardo_interp_check(const SpectralField& f, const ExponentPair& pair, double tau);

}  // namespace sobconst
