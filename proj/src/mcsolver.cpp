#include "fracdiff/mcsolver.hpp"

#include <cmath>

#include "fracdiff/errors.hpp"
#include "fracdiff/parallel.hpp"
#include "fracdiff/subord.hpp"

namespace fracdiff {

void McConfig::validate(const BoxDomain& dom) const {
    if (n_paths < 100) throw ValidationError("McConfig: n_paths must be at least 100");
    if (!(dt > 0.0)) throw ValidationError("McConfig: dt must be positive");
    if (!(dt <= 1e-2 / dom.principal_eigenvalue()))
        throw ValidationError("McConfig: dt must not exceed 1e-2 / mu_1");
    if (!(dx > 0.0)) throw ValidationError("McConfig: dx must be positive");
    if (budget == 0) throw ValidationError("McConfig: budget must be positive");
    if (double(n_paths) * double(budget) > resource_cap)
        throw ValidationError("McConfig: n_paths * budget exceeds the resource cap");
}

KilledPath run_killed_bm(const BoxDomain& dom, std::span<const double> x0, double clock, const McConfig& cfg,
                         RngStream& rng) {
    if (!dom.contains_open(x0)) throw ValidationError("run_killed_bm: start point must be strictly interior");
    if (!(clock >= 0.0)) throw DomainError("run_killed_bm: clock must be nonnegative");
    KilledPath path;
    path.endpoint.assign(x0.begin(), x0.end());
    double remaining = clock;
    const std::size_t d = dom.dim();
    while (remaining > 0.0) {
        const double h = std::min(cfg.dt, remaining);
        remaining -= h;
        if (++path.steps > cfg.budget) throw ResourceError("run_killed_bm: step budget exceeded");
        const double sigma = std::sqrt(2.0 * h);
        for (std::size_t a = 0; a < d; ++a) path.endpoint[a] += sigma * rng.normal();
        if (!dom.contains_closed(path.endpoint)) {
            path.alive = false;
            return path;
        }
    }
    return path;
}

namespace {

// Runs one path per index with the supplied clock sampler and reduces.
template <class Clock>
McEstimate estimate(const InitialData& f, const BoxDomain& dom, std::span<const double> x0, const McConfig& cfg,
                    Clock&& clock) {
    cfg.validate(dom);
    if (!dom.contains_open(x0)) throw ValidationError("mc_solve: start point must be strictly interior");
    auto values = map_indexed(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        RngStream rng(cfg.seed, i);
        const double c = clock(rng);
        const auto path = run_killed_bm(dom, x0, c, cfg, rng);
        return path.alive ? f.evaluate(dom, path.endpoint) : 0.0;
    });
    const auto summary = summarize(values);
    return {summary.mean, summary.std_error, summary.n};
}

}  // namespace

McEstimate mc_solve_fractional(const InitialData& f, const BoxDomain& dom, double beta, double t,
                               std::span<const double> x0, const McConfig& cfg) {
    if (!(t > 0.0)) throw DomainError("mc_solve_fractional: t must be positive");
    const StableIndex idx(beta);
    return estimate(f, dom, x0, cfg, [&](RngStream& rng) { return sample_inverse(idx, t, rng); });
}

McEstimate mc_solve_distributed(const InitialData& f, const BoxDomain& dom, const OrderMeasure& m, double t,
                                std::span<const double> x0, const McConfig& cfg) {
    if (!(t > 0.0)) throw DomainError("mc_solve_distributed: t must be positive");
    validate_measure(m);
    if (!m.atoms_only()) throw ValidationError("mc_solve_distributed: requires an atoms-only measure");
    return estimate(f, dom, x0, cfg,
                    [&](RngStream& rng) { return sample_inverse_composite(m, t, rng, cfg.dx, cfg.budget); });
}

FieldSample mc_solve(const InitialData& f, const BoxDomain& dom, const TimeOrder& order, double t,
                     std::span<const Point> points, const McConfig& cfg) {
    FieldSample out;
    out.t = t;
    out.engine = Engine::montecarlo;
    out.points.assign(points.begin(), points.end());
    for (const auto& x : points) {
        if (dom.on_boundary(x)) {
            // Dirichlet condition: every path starting here is killed at once.
            out.values.push_back(0.0);
            out.std_errors.push_back(0.0);
            continue;
        }
        McEstimate e;
        if (std::holds_alternative<ClassicalOrder>(order)) e = mc_solve_fractional(f, dom, 1.0, t, x, cfg);
        else if (const auto* fr = std::get_if<FractionalOrder>(&order))
            e = mc_solve_fractional(f, dom, fr->beta, t, x, cfg);
        else e = mc_solve_distributed(f, dom, std::get<OrderMeasure>(order), t, x, cfg);
        out.values.push_back(e.estimate);
        out.std_errors.push_back(e.std_error);
    }
    return out;
}

}  // namespace fracdiff
