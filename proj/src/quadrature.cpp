#include "fracdiff/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace fracdiff {

GaussRule gauss_legendre(std::size_t n, double lo, double hi) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / double(k);
            }
            dp = double(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged root for the weight.
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / double(k);
        }
        dp = double(n) * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace fracdiff
