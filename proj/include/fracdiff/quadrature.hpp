#pragma once

// Numerical integration kernels shared by every module: globally adaptive
// Gauss-Kronrod (7/15) on finite intervals, and Gauss-Legendre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace fracdiff {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Kronrod nodes on [0,1] (symmetric half), G7 nodes are the odd entries.
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

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    const double err = std::abs((kronrod - gauss) * half);
    return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod over [a,b] split at `breaks`.
/// Refines the worst segment until error <= max(abs_tol, rel_tol*|I|).
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                     std::span<const double> breaks = {}, std::size_t max_segments = 4000) {
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    std::priority_queue<detail::Segment> heap;
    QuadResult out;
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        auto s = detail::gk15(f, cuts[i], cuts[i + 1]);
        total += s.value;
        error += s.error;
        heap.push(s);
    }
    out.evaluations = 15 * heap.size();
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_segments) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Recompute from the pieces; the running sums drift after many updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error = error;
    out.converged = error <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

/// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n, double lo = -1.0, double hi = 1.0);

}  // namespace fracdiff
