#include "sobconst/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace sobconst {

double weak_sup_factor(double p_t, double q_t) {
    if (!(p_t > 1.0 && q_t > p_t) || !std::isfinite(q_t)) {
        throw DomainError("weak_sup_factor requires 1 < p_t < q_t < inf");
    }
    constexpr int kSamples = 10000;
    const double lo = std::log(1e-6);
    const double hi = std::log(1e9);
    const auto objective = [&](double log_u) { return weak_sup_objective(std::exp(log_u), p_t, q_t); };

    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < kSamples; ++i) {
        const double v = objective(lo + (hi - lo) * i / (kSamples - 1));
        if (!std::isfinite(v)) throw NumericalError("weak_sup_factor: non-finite objective");
        if (v >= best_value) {
            best_value = v;
            best = i;
        }
    }

    // Golden-section on the bracket around the best sample, clipped to the scan range.
    double a = lo + (hi - lo) * std::max(best - 1, 0) / (kSamples - 1);
    double b = lo + (hi - lo) * std::min(best + 1, kSamples - 1) / (kSamples - 1);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
        }
    }
    const double refined = std::max({best_value, fc, fd, objective(a), objective(b)});
    if (!std::isfinite(refined) || refined <= 0.0) throw NumericalError("weak_sup_factor: optimizer failed");
    return refined;
}

}  // namespace sobconst
