#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracdiff/distorder.hpp"
#include "fracdiff/spectral.hpp"

namespace fracdiff {

enum class Engine { spectral, montecarlo };

std::string engine_name(Engine e);

/// Solution values at a set of points for one time.
struct FieldSample {
    double t = 0.0;
    std::vector<Point> points;
    std::vector<double> values;
    double tail_bound = 0.0;
    Engine engine = Engine::spectral;
    /// Per-point standard errors; empty for the spectral engine.
    std::vector<double> std_errors;
};

/// Time operator of the Cauchy problem: d/dt, a Caputo derivative of order
/// beta, or a distributed-order operator.
struct ClassicalOrder {};
struct FractionalOrder {
    double beta;
};
using TimeOrder = std::variant<ClassicalOrder, FractionalOrder, OrderMeasure>;

/// Default truncation tolerance of the spectral solvers.
inline constexpr double kSeriesTolerance = 1e-6;

/// Heat equation: identical to solve_fractional with beta = 1.
FieldSample solve_heat(const SpectralCoefficients& coeffs, double t, std::span<const Point> points,
                       double tolerance = kSeriesTolerance);

/// u(t,x) = sum_n fbar(n) M_beta(-mu_n t^beta) phi_n(x), 0 < beta <= 1.
FieldSample solve_fractional(const SpectralCoefficients& coeffs, double beta, double t,
                             std::span<const Point> points, double tolerance = kSeriesTolerance);

/// u(t,x) = sum_n fbar(n) h(t, mu_n) phi_n(x).
FieldSample solve_distributed(const SpectralCoefficients& coeffs, const OrderMeasure& m, double t,
                              std::span<const Point> points, double tolerance = kSeriesTolerance);

/// Dispatches on the time operator.
FieldSample solve(const SpectralCoefficients& coeffs, const TimeOrder& order, double t,
                  std::span<const Point> points, double tolerance = kSeriesTolerance);

/// Modal time factor G(t; mu) of the given operator (exp, Mittag-Leffler or h).
double time_factor(const TimeOrder& order, double t, double mu);

/// Certified bound on |M_beta(-y)|: 1 / (1 + y / Gamma(1 + beta)).
double ml_majorant(double beta, double y);

/// L1 approximation of the Caputo derivative of order beta in (0,1) from
/// samples g_0..g_K on a uniform grid of step dt starting at t = 0.
/// Entry 0 of the result is 0.
std::vector<double> caputo_l1(std::span<const double> g, double dt, double beta);

struct ResidualReport {
    double max_residual = 0.0;
    double tail_bound = 0.0;
    std::size_t time_nodes = 0;
    std::size_t points = 0;
};

/// Max over t_k >= t_min and x in `points` of |time-operator u - Laplacian u|,
/// with the time operator discretized by L1 (exact derivative for the heat
/// equation) on the grid t_k = k dt, k = 0..round(t_end/dt), and the
/// Laplacian applied spectrally.
ResidualReport residual_check(const SpectralCoefficients& coeffs, const TimeOrder& order, double dt,
                              double t_end, std::span<const Point> points, double t_min = 0.1);

}  // namespace fracdiff
