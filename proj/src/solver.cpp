#include "fracdiff/solver.hpp"

#include <cmath>
#include <map>

#include "fracdiff/errors.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff {

namespace {

constexpr double kMlTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_time(double t, const char* who) {
    if (!(t > 0.0)) throw DomainError(std::string(who) + ": t must be positive");
}

// Evaluates G(mu) once per distinct eigenvalue among the nonzero coefficients.
template <class G>
std::vector<double> modal_factors(const SpectralCoefficients& coeffs, G&& g) {
    std::vector<double> factors(coeffs.size(), 0.0);
    std::map<double, double> cache;
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        if (coeffs.values()[flat] == 0.0) continue;
        const double mu = eigenvalue(coeffs.domain(), coeffs.mode_at(flat));
        auto it = cache.find(mu);
        if (it == cache.end()) it = cache.emplace(mu, g(mu)).first;
        factors[flat] = it->second;
    }
    return factors;
}

FieldSample assemble(const SpectralCoefficients& coeffs, double t, std::span<const Point> points,
                     const std::vector<double>& factors, double tail_factor, double tolerance, const char* who) {
    FieldSample out;
    out.t = t;
    out.engine = Engine::spectral;
    out.points.assign(points.begin(), points.end());
    out.values.reserve(points.size());
    for (const auto& x : points) {
        const auto v = modal_sum(coeffs, factors, tail_factor, x);
        out.values.push_back(v.value);
        out.tail_bound = std::max(out.tail_bound, v.tail_bound);
    }
    if (out.tail_bound > tolerance) throw TruncationError(std::string(who) + ": truncation tail too large", out.tail_bound);
    return out;
}

}  // namespace

std::string engine_name(Engine e) { return e == Engine::spectral ? "spectral" : "montecarlo"; }

double ml_majorant(double beta, double y) {
    if (beta >= 1.0) return std::exp(-y);
    return 1.0 / (1.0 + y / std::tgamma(1.0 + beta));
}

FieldSample solve_fractional(const SpectralCoefficients& coeffs, double beta, double t,
                             std::span<const Point> points, double tolerance) {
    check_time(t, "solve_fractional");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("solve_fractional: beta must lie in (0, 1]");
    const double tb = std::pow(t, beta);
    const auto factors = modal_factors(coeffs, [&](double mu) { return mittag_leffler(beta, -mu * tb, kMlTolerance); });
    const double tail = ml_majorant(beta, coeffs.first_unresolved_eigenvalue() * tb);
    return assemble(coeffs, t, points, factors, tail, tolerance, "solve_fractional");
}

FieldSample solve_heat(const SpectralCoefficients& coeffs, double t, std::span<const Point> points,
                       double tolerance) {
    return solve_fractional(coeffs, 1.0, t, points, tolerance);
}

FieldSample solve_distributed(const SpectralCoefficients& coeffs, const OrderMeasure& m, double t,
                              std::span<const Point> points, double tolerance) {
    check_time(t, "solve_distributed");
    validate_measure(m);
    const auto factors = modal_factors(coeffs, [&](double mu) { return h_eigen(m, t, mu).value; });
    double tail = 0.0;
    if (coeffs.tail_l1() > 0.0) {
        // h(t, .) is decreasing, so the first unresolved eigenvalue dominates the tail.
        const auto h = h_eigen(m, t, coeffs.first_unresolved_eigenvalue());
        tail = std::min(1.0, h.value + h.est_error);
    }
    return assemble(coeffs, t, points, factors, tail, tolerance, "solve_distributed");
}

FieldSample solve(const SpectralCoefficients& coeffs, const TimeOrder& order, double t,
                  std::span<const Point> points, double tolerance) {
    return std::visit(overloaded{
                          [&](const ClassicalOrder&) { return solve_heat(coeffs, t, points, tolerance); },
                          [&](const FractionalOrder& f) {
                              return solve_fractional(coeffs, f.beta, t, points, tolerance);
                          },
                          [&](const OrderMeasure& m) { return solve_distributed(coeffs, m, t, points, tolerance); },
                      },
                      order);
}

double time_factor(const TimeOrder& order, double t, double mu) {
    if (t == 0.0) return 1.0;
    return std::visit(overloaded{
                          [&](const ClassicalOrder&) { return std::exp(-mu * t); },
                          [&](const FractionalOrder& f) {
                              return mittag_leffler(f.beta, -mu * std::pow(t, f.beta), kMlTolerance);
                          },
                          [&](const OrderMeasure& m) { return h_eigen(m, t, mu).value; },
                      },
                      order);
}

std::vector<double> caputo_l1(std::span<const double> g, double dt, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("caputo_l1: beta must lie in (0, 1)");
    if (!(dt > 0.0)) throw DomainError("caputo_l1: dt must be positive");
    if (g.size() < 3) throw DomainError("caputo_l1: need at least three samples");
    const std::size_t n = g.size();
    // b_m = (m+1)^{1-beta} - m^{1-beta}: exact kernel integral over one cell.
    std::vector<double> b(n);
    for (std::size_t m = 0; m < n; ++m) b[m] = std::pow(double(m + 1), 1.0 - beta) - std::pow(double(m), 1.0 - beta);
    std::vector<double> diff(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) diff[j] = g[j + 1] - g[j];
    const double scale = std::pow(dt, -beta) / std::tgamma(2.0 - beta);
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += b[k - 1 - j] * diff[j];
        out[k] = scale * s;
    }
    return out;
}

ResidualReport residual_check(const SpectralCoefficients& coeffs, const TimeOrder& order, double dt,
                              double t_end, std::span<const Point> points, double t_min) {
    if (!(dt > 0.0) || !(t_end > t_min)) throw DomainError("residual_check: need dt > 0 and t_end > t_min");
    const auto steps = std::size_t(std::llround(t_end / dt));
    if (steps < 2) throw DomainError("residual_check: grid too coarse");
    if (const auto* m = std::get_if<OrderMeasure>(&order)) validate_measure(*m);

    // Per-mode residual r_n(t_k) = (time operator G_n)(t_k) + mu_n G_n(t_k).
    std::map<double, std::vector<double>> by_eigenvalue;
    auto mode_residual = [&](double mu) {
        std::vector<double> g(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) g[k] = time_factor(order, double(k) * dt, mu);
        std::vector<double> op(steps + 1, 0.0);
        if (std::holds_alternative<ClassicalOrder>(order) ||
            (std::holds_alternative<FractionalOrder>(order) && std::get<FractionalOrder>(order).beta == 1.0)) {
            for (std::size_t k = 0; k <= steps; ++k) op[k] = -mu * g[k];
        } else if (const auto* f = std::get_if<FractionalOrder>(&order)) {
            op = caputo_l1(g, dt, f->beta);
        } else {
            const auto& m = std::get<OrderMeasure>(order);
            for (std::size_t q = 0; q < m.orders().size(); ++q) {
                const auto part = caputo_l1(g, dt, m.orders()[q]);
                const double w = m.caputo_weights()[q];
                for (std::size_t k = 0; k <= steps; ++k) op[k] += w * part[k];
            }
        }
        std::vector<double> r(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) r[k] = op[k] + mu * g[k];
        return r;
    };

    std::vector<std::size_t> active;
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        if (coeffs.values()[flat] == 0.0) continue;
        active.push_back(flat);
        const double mu = eigenvalue(coeffs.domain(), coeffs.mode_at(flat));
        if (!by_eigenvalue.count(mu)) by_eigenvalue.emplace(mu, mode_residual(mu));
    }

    ResidualReport report;
    report.time_nodes = steps + 1;
    report.points = points.size();
    const auto first = std::size_t(std::ceil(t_min / dt - 1e-9));
    std::vector<const std::vector<double>*> rows;
    for (auto flat : active) rows.push_back(&by_eigenvalue.at(eigenvalue(coeffs.domain(), coeffs.mode_at(flat))));
    for (const auto& x : points) {
        std::vector<double> phi_coeff(active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
            phi_coeff[i] = coeffs.values()[active[i]] * eigenfunction(coeffs.domain(), coeffs.mode_at(active[i]), x);
        for (std::size_t k = first; k <= steps; ++k) {
            double r = 0.0;
            for (std::size_t i = 0; i < active.size(); ++i) r += phi_coeff[i] * (*rows[i])[k];
            report.max_residual = std::max(report.max_residual, std::abs(r));
        }
    }
    // Unresolved modes are not differenced; report their solution tail at t_min.
    report.tail_bound = coeffs.domain().sup_eigenfunction() * coeffs.tail_l1() *
                        time_factor(order, t_min, coeffs.first_unresolved_eigenvalue());
    return report;
}

}  // namespace fracdiff
