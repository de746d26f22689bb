#pragma once

#include <vector>

#include "sobconst/params.hpp"

namespace sobconst {

/// Series sum_k gamma^k / k! c^{p'k} (p'k)^k, started at k = ceil(p - 1).
struct MTSeriesSpec {
    double p = 2.0;
    double c = 1.0;
    int k_max = 1000;

    void validate() const;
    int start() const;
};

/// log of the k-th term without the gamma^k factor.
double mt_log_term(const MTSeriesSpec& spec, int k);

/// Compensated partial sum up to and including K.
double mt_series_partial(const MTSeriesSpec& spec, double gamma, int K);

/// term_{k+1} / term_k at the given gamma.
double mt_term_ratio(const MTSeriesSpec& spec, double gamma, int k);

/// 1/L for the root-test limit L, Richardson-extrapolated from term ratios at k_max/2 and k_max.
double mt_series_radius(const MTSeriesSpec& spec);

/// Closed form [e c^{p'} p']^{-1}.
double mt_radius_closed_form(const MTSeriesSpec& spec);

/// Times term_{k+1}/term_k - 1 changes sign for start <= k < K.
int mt_ratio_crossings(const MTSeriesSpec& spec, double gamma, int K);

struct MajorantCheck {
    double log_lhs;  ///< p'k log S(p, p'k)
    double log_rhs;  ///< k log(p'k) - p'k log(p-1)
    bool holds;
};

/// S(p, p'k)^{p'k} <= (p'k)^k / (p-1)^{p'k}, compared in log space; requires k >= p - 1.
MajorantCheck mt_majorant_check(double p, int k);

struct DivergencePair {
    double lhs;
    double rhs;
};

/// moments[i] belongs to k = ceil(p) + i.
/// lhs = sum gamma^k sigma^{p'k} m_k / k!, rhs = sigma^{pp'} sum gamma^k m_k / k!.
DivergencePair mt_scaling_divergence(double p, double gamma, const std::vector<double>& moments, double sigma);

}  // namespace sobconst
