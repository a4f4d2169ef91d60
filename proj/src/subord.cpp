#include "fracdiff/subord.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracdiff/errors.hpp"
#include "fracdiff/quadrature.hpp"

namespace fracdiff {

namespace {

constexpr double kPi = std::numbers::pi;

// Kanter's function A(u) on (0, pi), in logs:
// A(u) = sin(beta u)^{beta/(1-beta)} sin((1-beta) u) / sin(u)^{1/(1-beta)}.
double log_kanter(double beta, double u) {
    return (beta / (1.0 - beta)) * std::log(std::sin(beta * u)) + std::log(std::sin((1.0 - beta) * u)) -
           std::log(std::sin(u)) / (1.0 - beta);
}

// Large-x regime boundary: the series is used when x^{-beta} <= this.
constexpr double kSeriesThreshold = 0.5;

// sum_{k>=1} (-1)^{k+1}/k! Gamma(beta k + 1) sin(pi beta k) q^k z^{k-1}, with the
// caller folding the remaining powers into q and z. Terms decay factorially.
double stable_series_sum(double beta, double log_q, double log_z) {
    double sum = 0.0;
    for (int k = 1; k < 2000; ++k) {
        const double s = std::sin(kPi * beta * k);
        const double log_mag = std::lgamma(beta * k + 1.0) - std::lgamma(k + 1.0) + k * log_q + (k - 1) * log_z;
        const double term = (k % 2 == 1 ? 1.0 : -1.0) * s * std::exp(log_mag);
        sum += term;
        if (k > 3 && std::exp(log_mag) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

void require_fractional(StableIndex idx, const char* who) {
    if (idx.degenerate()) throw DomainError(std::string(who) + ": requires 0 < beta < 1");
}

}  // namespace

StableIndex::StableIndex(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("StableIndex: beta must lie in (0, 1]");
}

double sample_stable(StableIndex idx, RngStream& rng) {
    if (idx.degenerate()) return 1.0;
    const double beta = idx.beta();
    const double u = kPi * rng.uniform();
    const double w = rng.exponential();
    return std::exp((1.0 - beta) / beta * (log_kanter(beta, u) - std::log(w)));
}

double sample_stable_at(StableIndex idx, double t, RngStream& rng) {
    if (!(t > 0.0)) throw DomainError("sample_stable_at: t must be positive");
    if (idx.degenerate()) return t;
    return std::pow(t, 1.0 / idx.beta()) * sample_stable(idx, rng);
}

double inverse_from_stable(StableIndex idx, double t, double d1) {
    if (!(t > 0.0)) throw DomainError("sample_inverse: t must be positive");
    if (idx.degenerate()) return t;
    return std::exp(idx.beta() * (std::log(t) - std::log(d1)));
}

double sample_inverse(StableIndex idx, double t, RngStream& rng) {
    if (!(t > 0.0)) throw DomainError("sample_inverse: t must be positive");
    if (idx.degenerate()) return t;
    return inverse_from_stable(idx, t, sample_stable(idx, rng));
}

double stable_density_integral(double beta, double x) {
    const double alpha = beta / (1.0 - beta);
    const double log_z = -alpha * std::log(x);
    auto integrand = [&](double u) {
        const double v = std::exp(log_kanter(beta, u) + log_z);
        return v * std::exp(-v);
    };
    // A(u) increases on (0, pi): locate A(u) z = 1, where the integrand peaks.
    double breaks[1] = {-1.0};
    const double la0 = log_kanter(beta, 1e-8) + log_z;
    if (la0 < 0.0) {
        double lo = 1e-8, hi = kPi * (1.0 - 1e-15);
        for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
            const double mid = 0.5 * (lo + hi);
            (log_kanter(beta, mid) + log_z < 0.0 ? lo : hi) = mid;
        }
        breaks[0] = 0.5 * (lo + hi);
    }
    auto res = integrate(integrand, 0.0, kPi, 1e-300, 1e-12, std::span<const double>(breaks, 1), 8000);
    return alpha / (kPi * x) * res.value;
}

double stable_density_series(double beta, double x) {
    // f(x) = (1/pi) sum (-1)^{k+1}/k! Gamma(beta k+1) sin(pi beta k) x^{-beta k - 1}
    const double log_q = -beta * std::log(x);
    return stable_series_sum(beta, log_q, 0.0) / (kPi * x);
}

double stable_density(StableIndex idx, double x) {
    require_fractional(idx, "stable_density");
    if (!(x > 0.0)) throw DomainError("stable_density: x must be positive");
    const double beta = idx.beta();
    if (beta == 0.5) {
        return std::exp(-0.5 * std::log(4.0 * kPi) - 1.5 * std::log(x) - 0.25 / x);
    }
    if (std::pow(x, -beta) <= kSeriesThreshold) return stable_density_series(beta, x);
    return stable_density_integral(beta, x);
}

double inverse_density(StableIndex idx, double t, double l) {
    require_fractional(idx, "inverse_density");
    if (!(t > 0.0) || !(l > 0.0)) throw DomainError("inverse_density: t and l must be positive");
    const double beta = idx.beta();
    // x = t l^{-1/beta} is the argument handed to the D(1) density.
    const double log_x = std::log(t) - std::log(l) / beta;
    if (beta == 0.5) {
        const double log_fd = -0.5 * std::log(4.0 * kPi) - 1.5 * log_x - 0.25 * std::exp(-log_x);
        return std::exp(std::log(t / beta) + log_fd - (1.0 + 1.0 / beta) * std::log(l));
    }
    const double q = std::exp(-beta * log_x);  // = l t^{-beta}
    if (q <= kSeriesThreshold) {
        // Substituting the series term by term: (1/(pi beta)) sum c_k t^{-beta k} l^{k-1}.
        return stable_series_sum(beta, -beta * std::log(t), std::log(l)) / (kPi * beta);
    }
    const double fd = stable_density_integral(beta, std::exp(log_x));
    if (fd == 0.0) return 0.0;
    return std::exp(std::log(t / beta) + std::log(fd) - (1.0 + 1.0 / beta) * std::log(l));
}

double ctrw_count(StableIndex idx, double c, double t, RngStream& rng, std::size_t step_budget) {
    require_fractional(idx, "ctrw_count");
    if (!(c >= 1.0)) throw DomainError("ctrw_count: scale c must be >= 1");
    if (!(t > 0.0)) throw DomainError("ctrw_count: t must be positive");
    const double beta = idx.beta();
    const double horizon = c * t;
    double clock = 0.0;
    std::size_t renewals = 0;
    for (;;) {
        clock += std::pow(rng.uniform(), -1.0 / beta);
        if (clock > horizon) break;
        if (++renewals > step_budget) throw ResourceError("ctrw_count: renewal loop exceeded step budget");
    }
    // Pareto tail u^{-beta} gives a limit subordinator with exponent Gamma(1-beta) s^beta;
    // the Gamma factor maps its inverse onto the standard E(t).
    return std::tgamma(1.0 - beta) * std::pow(c, -beta) * double(renewals);
}

}  // namespace fracdiff
