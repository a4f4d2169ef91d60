#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "fracdiff/distorder.hpp"
#include "fracdiff/rng.hpp"
#include "fracdiff/solver.hpp"
#include "fracdiff/spectral.hpp"

namespace fracdiff {

struct McConfig {
    std::size_t n_paths = 100'000;
    /// Brownian time step.
    double dt = 1e-4;
    /// Grid step of the composite-subordinator walk (distributed order).
    double dx = 1e-3;
    std::uint64_t seed = 0;
    /// Maximum steps per path, counted separately for each random walk.
    std::size_t budget = 100'000'000;
    /// Ceiling on n_paths * budget.
    double resource_cap = 1e16;
    unsigned threads = 1;

    /// Throws ValidationError unless n_paths >= 100, dt <= 1e-2 / mu_1 and
    /// n_paths * budget <= resource_cap.
    void validate(const BoxDomain& dom) const;
};

struct KilledPath {
    bool alive = true;
    Point endpoint;
    std::size_t steps = 0;
};

/// Brownian motion with generator Laplacian (per-axis increment variance
/// 2 dt), started at interior x0 and run to time `clock`, killed at the first
/// grid time it lies outside the closed box. The final partial step is
/// taken with the remaining time.
KilledPath run_killed_bm(const BoxDomain& dom, std::span<const double> x0, double clock, const McConfig& cfg,
                         RngStream& rng);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// E_x[f(B(E(t))) 1(tau_D > E(t))] with E the inverse beta-stable clock,
/// 0 < beta <= 1. Path i uses stream (cfg.seed, i).
McEstimate mc_solve_fractional(const InitialData& f, const BoxDomain& dom, double beta, double t,
                               std::span<const double> x0, const McConfig& cfg);

/// Same with the clock drawn from the inverse composite subordinator.
McEstimate mc_solve_distributed(const InitialData& f, const BoxDomain& dom, const OrderMeasure& m, double t,
                                std::span<const double> x0, const McConfig& cfg);

/// Monte-Carlo FieldSample over many start points; each point reuses the
/// stream ids 0..n_paths-1.
FieldSample mc_solve(const InitialData& f, const BoxDomain& dom, const TimeOrder& order, double t,
                     std::span<const Point> points, const McConfig& cfg);

}  // namespace fracdiff
