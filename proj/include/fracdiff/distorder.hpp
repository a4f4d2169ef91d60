#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracdiff/rng.hpp"

namespace fracdiff {

/// Point mass of the order measure mu at beta.
struct Atom {
    double beta = 0.5;
    double weight = 1.0;
};

enum class DensityShape { uniform, linear };

/// Continuous part p(beta) on [beta0, beta1], integrated with a Gauss-Legendre
/// rule of `nodes` points. `uniform`: p = scale. `linear`: p rises from 0 at
/// beta0 to scale at beta1.
struct DensityPart {
    double beta0 = 0.25;
    double beta1 = 0.75;
    std::size_t nodes = 32;
    DensityShape shape = DensityShape::uniform;
    double scale = 1.0;

    double operator()(double beta) const;
};

/// Finite order measure mu on (0,1). The time operator it parameterizes is
/// sum_i w_i Gamma(1-b_i) d^{b_i}_t + int Gamma(1-b) p(b) d^b_t db, i.e. the
/// Caputo weights are nu = Gamma(1-beta) mu. Immutable once built.
class OrderMeasure {
public:
    /// Throws ValidationError on structural problems (betas outside (0,1),
    /// non-increasing atoms, non-positive weights, fewer than 32 nodes).
    OrderMeasure(std::vector<Atom> atoms, std::optional<DensityPart> density = std::nullopt);

    /// The measure whose operator is exactly d^beta_t: one atom of mass
    /// 1/Gamma(1-beta).
    static OrderMeasure caputo(double beta);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::optional<DensityPart>& density() const noexcept { return density_; }
    bool atoms_only() const noexcept { return !density_.has_value(); }

    /// Flattened quadrature of the whole measure: orders and mu-masses.
    /// Atoms contribute themselves; the density contributes its nodes.
    const std::vector<double>& orders() const noexcept { return orders_; }
    const std::vector<double>& masses() const noexcept { return masses_; }

    /// Caputo weight nu_k = Gamma(1 - beta_k) * mass_k for each flattened entry.
    const std::vector<double>& caputo_weights() const noexcept { return caputo_weights_; }

    double min_order() const;
    double max_order() const;

private:
    std::vector<Atom> atoms_;
    std::optional<DensityPart> density_;
    std::vector<double> orders_, masses_, caputo_weights_;
};

struct MeasureDiagnostics {
    double total_mass = 0.0;
    /// int mu(d beta) / (1 - beta)
    double inverse_gap_integral = 0.0;
    /// int sin(pi beta) Gamma(1-beta) p(beta) d beta over the density part (0 if absent)
    double density_constant = 0.0;
    bool accepted = false;
    std::string violation;
};

/// Default ceiling on int mu/(1-beta).
inline constexpr double kInverseGapCeiling = 1e3;

/// Computes the diagnostics without throwing.
MeasureDiagnostics diagnose_measure(const OrderMeasure& m, double ceiling = kInverseGapCeiling);

/// Throws ValidationError naming the violated condition, otherwise returns
/// the diagnostics.
MeasureDiagnostics validate_measure(const OrderMeasure& m, double ceiling = kInverseGapCeiling);

/// Text format, one directive per line, '#' starts a comment:
///   atom <beta> <weight>
///   density <beta0> <beta1> <nodes> [uniform|linear] [scale]
OrderMeasure parse_measure(std::istream& in);
OrderMeasure load_measure(const std::string& path);

/// Laplace exponent psi_W(s) = int s^beta Gamma(1-beta) mu(d beta).
double psi_w(const OrderMeasure& m, double s);

/// Levy tail phi_W(t, inf) = int t^{-beta} mu(d beta).
double levy_tail(const OrderMeasure& m, double t);

struct EigenSolution {
    double t = 0.0;
    double lambda = 0.0;
    double value = 0.0;
    double est_error = 0.0;
};

/// Solution h(t, lambda) of the distributed-order eigenvalue problem
/// D h = -lambda h, h(0) = 1, by inverting its Laplace transform along the
/// negative real axis. Throws ConvergenceError if est_error > abs_tol.
EigenSolution h_eigen(const OrderMeasure& m, double t, double lambda, double abs_tol = 1e-8);

/// k(t) = [C pi]^{-1} [Gamma(1-b1) t^{b1-1} + Gamma(1-b0) t^{b0-1}], bounding
/// |d/dt h(t,lambda)| <= lambda k(t). Requires a density part with C > 0.
double k_bound(const OrderMeasure& m, double t);

/// W(x) = sum_i a_i D_i(x), a_i = (w_i Gamma(1-beta_i))^{1/beta_i}. Atoms only.
double sample_composite_subordinator(const OrderMeasure& m, double x, RngStream& rng);

/// First passage of a simulated W path above each t in `times` (sorted
/// ascending), walking on a grid of step dx. Each result is the midpoint of
/// the grid cell containing the passage, so it is within dx/2 of E(t).
std::vector<double> sample_inverse_composite_path(const OrderMeasure& m, const std::vector<double>& times,
                                                  RngStream& rng, double dx,
                                                  std::size_t step_budget = 100'000'000);

/// Single-time version of sample_inverse_composite_path.
double sample_inverse_composite(const OrderMeasure& m, double t, RngStream& rng, double dx,
                                std::size_t step_budget = 100'000'000);

/// Monte-Carlo estimate of the density g(t, x) of E(t):
/// E[phi_W(t - W(x), inf); W(x) < t]. Paths use streams (seed, 0..n-1).
SampleSummary g_density_mc(const OrderMeasure& m, double t, double x, std::size_t n_paths,
                           std::uint64_t seed, unsigned threads = 1);

}  // namespace fracdiff
