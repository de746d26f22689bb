#include "sobconst/series.hpp"

#include <cmath>

#include "sobconst/constants.hpp"

namespace sobconst {

void MTSeriesSpec::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("series: p must lie in (1, inf)");
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("series: c must be > 0");
    if (k_max < 8 || k_max > 2000) throw DomainError("series: k_max must lie in [8, 2000]");
}

int MTSeriesSpec::start() const { return static_cast<int>(std::ceil(p - 1.0)); }

double mt_log_term(const MTSeriesSpec& spec, int k) {
    if (k < 0) throw DomainError("series index must be >= 0");
    const double pc = conjugate_exponent(spec.p);
    const double kk = k;
    const double power = k == 0 ? 0.0 : kk * std::log(pc * kk);
    return -std::lgamma(kk + 1.0) + pc * kk * std::log(spec.c) + power;
}

double mt_series_partial(const MTSeriesSpec& spec, double gamma, int K) {
    spec.validate();
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("series: gamma must be >= 0");
    if (K > spec.k_max) throw DomainError("series: K exceeds k_max");
    if (gamma == 0.0) return 0.0;
    const double log_gamma = std::log(gamma);
    double sum = 0.0;
    double comp = 0.0;
    for (int k = spec.start(); k <= K; ++k) {
        const double term = std::exp(k * log_gamma + mt_log_term(spec, k));
        if (!std::isfinite(term)) throw NumericalError("series term overflowed at k = " + std::to_string(k));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double mt_term_ratio(const MTSeriesSpec& spec, double gamma, int k) {
    spec.validate();
    if (!(gamma > 0.0)) throw DomainError("series: term ratio needs gamma > 0");
    return std::exp(std::log(gamma) + mt_log_term(spec, k + 1) - mt_log_term(spec, k));
}

double mt_series_radius(const MTSeriesSpec& spec) {
    spec.validate();
    const auto ratio = [&](int k) { return std::exp(mt_log_term(spec, k + 1) - mt_log_term(spec, k)); };
    const int hi = spec.k_max - 1;
    const int mid = hi / 2;
    const int lo = mid / 2;
    const double fine = 2.0 * ratio(2 * mid) - ratio(mid);
    const double coarse = 2.0 * ratio(2 * lo) - ratio(lo);
    if (!(fine > 0.0) || std::abs(fine - coarse) > 1e-3 * fine) {
        throw NumericalError("series radius: extrapolation did not settle; increase k_max");
    }
    return 1.0 / fine;
}

double mt_radius_closed_form(const MTSeriesSpec& spec) {
    spec.validate();
    const double pc = conjugate_exponent(spec.p);
    return 1.0 / (std::exp(1.0) * std::pow(spec.c, pc) * pc);
}

int mt_ratio_crossings(const MTSeriesSpec& spec, double gamma, int K) {
    spec.validate();
    if (K > spec.k_max) throw DomainError("series: K exceeds k_max");
    int crossings = 0;
    int k = std::max(spec.start(), 1);
    bool above = mt_term_ratio(spec, gamma, k) > 1.0;
    for (++k; k < K; ++k) {
        const bool now = mt_term_ratio(spec, gamma, k) > 1.0;
        if (now != above) ++crossings;
        above = now;
    }
    return crossings;
}

MajorantCheck mt_majorant_check(double p, int k) {
    if (!(p > 1.0)) throw DomainError("majorant: p must be > 1");
    if (k < 1 || k < p - 1.0) throw DomainError("majorant: k must satisfy k >= p - 1");
    const double pc = conjugate_exponent(p);
    const double q = pc * k;
    MajorantCheck out{};
    out.log_lhs = q * std::log(S(p, q));
    out.log_rhs = k * std::log(q) - q * std::log(p - 1.0);
    out.holds = out.log_lhs <= out.log_rhs + 1e-12 * std::max(1.0, std::abs(out.log_rhs));
    return out;
}

DivergencePair mt_scaling_divergence(double p, double gamma, const std::vector<double>& moments, double sigma) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("divergence: p must lie in (1, inf)");
    if (!(gamma > 0.0)) throw DomainError("divergence: gamma must be > 0");
    if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw DomainError("divergence: sigma must be >= 1");
    const double pc = conjugate_exponent(p);
    const int first = static_cast<int>(std::ceil(p));
    // Both sides share sigma^{pp'}; the remaining factor sigma^{p'(k-p)} is >= 1 termwise.
    double weighted = 0.0;
    double plain = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        if (!(moments[i] >= 0.0)) throw DomainError("divergence: moments must be >= 0");
        const int k = first + static_cast<int>(i);
        if (moments[i] == 0.0) continue;
        const double w = std::exp(k * std::log(gamma) - std::lgamma(k + 1.0)) * moments[i];
        plain += w;
        weighted += w * std::pow(sigma, pc * (k - p));
    }
    if (plain == 0.0) return {0.0, 0.0};
    // Overflow saturates to +inf, which keeps lhs >= rhs.
    const double common = std::pow(sigma, p * pc);
    return {common * weighted, common * plain};
}

}  // namespace sobconst
