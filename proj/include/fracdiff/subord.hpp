#pragma once

#include <cstddef>

#include "fracdiff/rng.hpp"

namespace fracdiff {

/// Index of a standard stable subordinator, E[exp(-s D(t))] = exp(-t s^beta).
/// beta = 1 is the deterministic clock D(t) = t.
class StableIndex {
public:
    explicit StableIndex(double beta);
    double beta() const noexcept { return beta_; }
    bool degenerate() const noexcept { return beta_ == 1.0; }

private:
    double beta_;
};

/// One draw of D(1) (Kanter's exact representation).
double sample_stable(StableIndex idx, RngStream& rng);

/// One draw of D(t) = t^{1/beta} D(1).
double sample_stable_at(StableIndex idx, double t, RngStream& rng);

/// Maps a D(1) draw to E(t) = (t / D(1))^beta. E(t) is nondecreasing in t
/// for a fixed draw, which is what the monotone coupling relies on.
double inverse_from_stable(StableIndex idx, double t, double d1);

/// One draw of the inverse subordinator E(t).
double sample_inverse(StableIndex idx, double t, RngStream& rng);

/// Density of D(1), 0 < beta < 1. Closed form at beta = 1/2, otherwise a
/// convergent series for large x and an integral representation below.
double stable_density(StableIndex idx, double x);

/// Raw regimes of stable_density; used by the consistency tests.
double stable_density_integral(double beta, double x);
double stable_density_series(double beta, double x);

/// Density of E(t) at l: (t/beta) f_{D(1)}(t l^{-1/beta}) l^{-1-1/beta}.
double inverse_density(StableIndex idx, double t, double l);

/// Renewal count of a continuous-time random walk with Pareto waiting times
/// P(J > u) = u^{-beta}, u >= 1, rescaled to converge to E(t) as c grows:
/// returns Gamma(1-beta) c^{-beta} N(c t). Throws ResourceError past
/// `step_budget` renewals.
double ctrw_count(StableIndex idx, double c, double t, RngStream& rng,
                  std::size_t step_budget = 100'000'000);

}  // namespace fracdiff
