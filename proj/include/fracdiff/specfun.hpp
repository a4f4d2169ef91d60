#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "fracdiff/quadrature.hpp"

namespace fracdiff {

/// Gamma function for 0 < x < 171. Throws DomainError outside that range.
double gamma_fn(double x);

/// One Mittag-Leffler evaluation request M_beta(x) on the negative real axis.
struct MLQuery {
    double beta = 1.0;
    double x = 0.0;
    double rel_tol = 1e-10;
    /// Forces the series/integral switchover to |x| = value. Test hook only.
    std::optional<double> switch_override{};

    /// Throws DomainError unless 0 < beta <= 1, x <= 0 and 0 < rel_tol < 1e-3.
    void validate() const;
};

/// M_beta(x) = sum_n x^n / Gamma(1 + beta n) for x <= 0, relative accuracy
/// q.rel_tol. Power series below the switchover, spectral integral above.
/// Throws ConvergenceError when neither regime meets the tolerance.
double mittag_leffler(const MLQuery& q);

/// Convenience overload: M_beta(x) at the default tolerance.
double mittag_leffler(double beta, double x, double rel_tol = 1e-10);

/// Largest |x| for which the power series keeps its largest term within the
/// cancellation budget for rel_tol. Found by bisection on the predicate used
/// inside mittag_leffler, so the two always agree.
double ml_switch_point(double beta, double rel_tol);

/// Raw evaluators, exposed for the regime-continuity checks.
/// Both return {value, estimated relative error}.
std::pair<double, double> ml_series(double beta, double x, double rel_tol);
std::pair<double, double> ml_integral(double beta, double x, double rel_tol);

/// Real and imaginary parts of the symbol sum_i g_i (r e^{i pi})^{b_i}-style
/// kernel at r: {sum g_i r^{b_i} cos(pi b_i), sum g_i r^{b_i} sin(pi b_i)}.
using SymbolFn = std::function<std::pair<double, double>(double)>;

/// Bromwich-contour inversion shared by Mittag-Leffler and the
/// distributed-order eigenfunction:
///
///   (lambda/pi) * int_0^inf r^{-1} e^{-t r} S(r) / ((lambda + C(r))^2 + S(r)^2) dr
///
/// with {C, S} = symbol(r). `min_exponent` is the smallest power of r in the
/// symbol (controls the r -> 0 tail). `peaks` are r-locations where the
/// denominator is small and the integrand is sharply peaked.
QuadResult spectral_inversion(double t, double lambda, const SymbolFn& symbol,
                              double min_exponent, std::span<const double> peaks,
                              double abs_tol, double rel_tol);

}  // namespace fracdiff
