#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "sobconst/error.hpp"

namespace sobconst {

template <typename Scalar>
struct QuadratureResult {
    Scalar value{};
    Scalar error{};
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Segment {
    Scalar a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Segment<Scalar> kronrod15(F& f, Scalar a, Scalar b) {
    const Scalar center = Scalar(0.5) * (a + b);
    const Scalar half = Scalar(0.5) * (b - a);
    const Scalar fc = f(center);
    Scalar kronrod = fc * Scalar(kKronrodWeights[7]);
    Scalar gauss = fc * Scalar(kGaussWeights[3]);
    for (int i = 0; i < 7; ++i) {
        const Scalar dx = half * Scalar(kKronrodNodes[i]);
        const Scalar sum = f(center - dx) + f(center + dx);
        kronrod += Scalar(kKronrodWeights[i]) * sum;
        if (i % 2 == 1) gauss += Scalar(kGaussWeights[i / 2]) * sum;
    }
    using std::abs;
    return {a, b, kronrod * half, abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
///
/// Bisects the segment with the largest error estimate until the summed estimate is
/// below max(abs_tol, rel_tol * |value|). Throws NumericalError past max_intervals.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F&& f, Scalar a, Scalar b, Scalar rel_tol, Scalar abs_tol = Scalar(0),
                                   int max_intervals = 4000) {
    using std::abs;
    using std::max;
    if (a == b) return {};
    std::priority_queue<detail::Segment<Scalar>> heap;
    heap.push(detail::kronrod15<Scalar>(f, a, b));
    Scalar value = heap.top().value;
    Scalar error = heap.top().error;
    int intervals = 1;
    while (error > max(abs_tol, rel_tol * abs(value))) {
        if (intervals >= max_intervals) {
            throw NumericalError("adaptive quadrature did not converge");
        }
        const auto worst = heap.top();
        heap.pop();
        const Scalar mid = Scalar(0.5) * (worst.a + worst.b);
        auto left = detail::kronrod15<Scalar>(f, worst.a, mid);
        auto right = detail::kronrod15<Scalar>(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
        if (!std::isfinite(value)) throw NumericalError("adaptive quadrature produced a non-finite value");
    }
    // Re-sum from scratch so incremental updates do not leave cancellation residue.
    Scalar total = 0, total_err = 0, comp = 0;
    std::vector<detail::Segment<Scalar>> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    for (const auto& s : segs) {
        const Scalar y = s.value - comp;
        const Scalar t = total + y;
        comp = (t - total) - y;
        total = t;
        total_err += s.error;
    }
    return {total, total_err, intervals};
}

}  // namespace sobconst
