#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>

#include "fracdiff/cli.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/parallel.hpp"
#include "fracdiff/specfun.hpp"
#include "fracdiff/subord.hpp"

namespace fracdiff {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const std::vector<std::string> kScenarioKeys = {"domain", "initial", "beta",  "measure", "times",
                                                "points", "grid",    "modes", "tolerance"};
const std::vector<std::string> kMcKeys = {"n_paths", "dt", "dx", "budget"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double require_beta(const RunConfig& cfg) {
    if (!cfg.has("beta")) throw ConfigError("'beta' is required");
    const double beta = cfg.number("beta", 1.0);
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("'beta' must lie in (0, 1]");
    return beta;
}

OrderMeasure require_measure(const RunConfig& cfg) {
    auto m = load_measure(cfg.text("measure", ""));
    try {
        validate_measure(m);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("measure: ") + e.what());
    }
    return m;
}

std::string point_header(std::size_t d) {
    std::string h = "t";
    for (std::size_t a = 0; a < d; ++a) h += ",x" + std::to_string(a + 1);
    return h;
}

void append_rows(std::ostringstream& out, const FieldSample& s) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        out << format_number(s.t);
        for (double c : s.points[i]) out << ',' << format_number(c);
        out << ',' << format_number(s.values[i]) << ',' << format_number(s.tail_bound) << ','
            << engine_name(s.engine);
        if (s.engine == Engine::montecarlo) out << ',' << format_number(s.std_errors[i]);
        out << '\n';
    }
}

struct Check {
    std::string name;
    double measured;
    double tolerance;
    bool pass;
};

Check at_most(std::string name, double measured, double tolerance) {
    return {std::move(name), measured, tolerance, measured <= tolerance};
}

Check at_least(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, measured >= threshold};
}

double mc_mean_check(std::size_t n, const RunConfig& cfg, std::uint64_t salt, const auto& draw, double exact,
                     double& tolerance) {
    auto values = map_indexed(n, cfg.threads, [&](std::size_t i) {
        RngStream rng(cfg.seed ^ salt, i);
        return draw(rng);
    });
    const auto s = summarize(values);
    tolerance = 3.0 * s.std_error;
    return std::abs(s.mean - exact);
}

}  // namespace

CommandResult cmd_ml(const RunConfig& cfg) {
    cfg.require_known({"beta", "x", "rel_tol"});
    const double beta = require_beta(cfg);
    const auto xs = cfg.numbers("x");
    if (xs.empty()) throw ConfigError("'x' must list at least one argument");
    MLQuery q;
    q.beta = beta;
    q.rel_tol = cfg.number("rel_tol", q.rel_tol);
    for (double x : xs) {
        q.x = x;
        try {
            q.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    std::ostringstream out;
    out << "beta,x,value\n";
    for (double x : xs) {
        q.x = x;
        out << format_number(beta) << ',' << format_number(x) << ',' << format_number(mittag_leffler(q)) << '\n';
    }
    return {out.str(), true};
}

CommandResult cmd_sample(const RunConfig& cfg) {
    cfg.require_known({"sampler", "beta", "measure", "t", "count", "c", "dx", "budget"});
    const auto sampler = cfg.text("sampler", "stable");
    const double t = cfg.number("t", 1.0);
    if (!(t > 0.0)) throw ConfigError("'t' must be positive");
    const auto n = cfg.count("count", 1000);
    if (n < 1) throw ConfigError("'count' must be positive");

    std::function<double(RngStream&)> draw;
    if (sampler == "composite") {
        const auto m = std::make_shared<OrderMeasure>(require_measure(cfg));
        if (!m->atoms_only()) throw ConfigError("measure: the composite sampler needs atoms only");
        const double dx = cfg.number("dx", 1e-3);
        const auto budget = cfg.count("budget", 100'000'000);
        if (!(dx > 0.0)) throw ConfigError("'dx' must be positive");
        draw = [m, t, dx, budget](RngStream& r) { return sample_inverse_composite(*m, t, r, dx, budget); };
    } else {
        const StableIndex idx(require_beta(cfg));
        if (sampler == "stable") {
            draw = [idx, t](RngStream& r) { return sample_stable_at(idx, t, r); };
        } else if (sampler == "inverse") {
            draw = [idx, t](RngStream& r) { return sample_inverse(idx, t, r); };
        } else if (sampler == "ctrw") {
            const double c = cfg.number("c", 1e3);
            if (!(c >= 1.0)) throw ConfigError("'c' must be at least 1");
            const auto budget = cfg.count("budget", 100'000'000);
            draw = [idx, t, c, budget](RngStream& r) { return ctrw_count(idx, c, t, r, budget); };
        } else {
            throw ConfigError("'sampler' must be one of stable, inverse, composite, ctrw");
        }
    }
    const auto values = map_indexed(n, cfg.threads, [&](std::size_t i) {
        RngStream rng(cfg.seed, i);
        return draw(rng);
    });
    std::ostringstream out;
    out << "index,value\n";
    for (std::size_t i = 0; i < n; ++i) out << i << ',' << format_number(values[i]) << '\n';
    return {out.str(), true};
}

CommandResult cmd_eigen(const RunConfig& cfg) {
    cfg.require_known({"beta", "measure", "times", "lambda"});
    if (cfg.has("beta") == cfg.has("measure")) throw ConfigError("give exactly one of 'beta' or 'measure'");
    const auto times = cfg.numbers("times");
    const auto lambdas = cfg.numbers("lambda");
    if (times.empty() || lambdas.empty()) throw ConfigError("'times' and 'lambda' must be non-empty");
    for (double t : times)
        if (!(t > 0.0)) throw ConfigError("'times' must be positive");
    for (double l : lambdas)
        if (!(l > 0.0)) throw ConfigError("'lambda' must be positive");

    std::optional<OrderMeasure> m;
    double beta = 1.0;
    if (cfg.has("measure")) m = require_measure(cfg);
    else beta = require_beta(cfg);

    std::ostringstream out;
    out << "t,lambda,value,est_error\n";
    for (double t : times) {
        for (double l : lambdas) {
            double value, err;
            if (m) {
                const auto h = h_eigen(*m, t, l);
                value = h.value;
                err = h.est_error;
            } else {
                constexpr double tol = 1e-12;
                value = mittag_leffler(beta, -l * std::pow(t, beta), tol);
                err = tol * std::abs(value);
            }
            out << format_number(t) << ',' << format_number(l) << ',' << format_number(value) << ','
                << format_number(err) << '\n';
        }
    }
    return {out.str(), true};
}

CommandResult cmd_solve(const RunConfig& cfg) {
    cfg.require_known(kScenarioKeys);
    const auto sc = resolve_scenario(cfg, false);
    const auto coeffs = project(sc.initial, sc.domain, sc.max_mode);
    std::ostringstream out;
    out << point_header(sc.domain.dim()) << ",value,tail_bound,engine\n";
    for (double t : sc.times) append_rows(out, solve(coeffs, sc.order, t, sc.points, sc.tolerance));
    return {out.str(), true};
}

CommandResult cmd_mc(const RunConfig& cfg) {
    cfg.require_known(concat(kScenarioKeys, kMcKeys));
    const auto sc = resolve_scenario(cfg, true);
    std::ostringstream out;
    out << point_header(sc.domain.dim()) << ",value,tail_bound,engine,stderr\n";
    for (double t : sc.times) append_rows(out, mc_solve(sc.initial, sc.domain, sc.order, t, sc.points, sc.mc));
    return {out.str(), true};
}

CommandResult cmd_validate(const RunConfig& cfg) {
    cfg.require_known({"n_paths", "samples", "dt", "measure", "test_hook"});
    const auto hook = cfg.text("test_hook", "none");
    if (hook != "none" && hook != "corrupt_ml_switch")
        throw ConfigError("'test_hook' must be 'none' or 'corrupt_ml_switch'");
    const auto n_paths = cfg.count("n_paths", 20'000);
    const auto samples = cfg.count("samples", 200'000);
    if (samples < 100) throw ConfigError("'samples' must be at least 100");
    OrderMeasure two({{0.3, 0.5}, {0.7, 0.5}}, std::nullopt);
    if (cfg.has("measure")) {
        two = require_measure(cfg);
        if (!two.atoms_only()) throw ConfigError("measure: validation needs atoms only");
    }
    const BoxDomain unit({1.0});
    McConfig mc;
    mc.n_paths = n_paths;
    mc.dt = cfg.number("dt", 1e-4);
    mc.seed = cfg.seed;
    mc.threads = cfg.threads;
    try {
        mc.validate(unit);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    std::vector<Check> checks;

    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double x = std::pow(10.0, -3.0 + i * (std::log10(50.0) + 3.0) / 49.0);
            worst = std::max(worst, std::abs(mittag_leffler(1.0, -x) - std::exp(-x)) / std::exp(-x));
        }
        checks.push_back(at_most("ml_exponential", worst, 1e-10));
    }
    {
        MLQuery q;
        q.beta = 0.5;
        // The hook moves the switchover far into the cancellation range of the series.
        if (hook == "corrupt_ml_switch") q.switch_override = 50.0;
        double worst = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const long double x = 0.1L * i;
            const double exact = static_cast<double>(std::exp(x * x) * std::erfc(x));
            q.x = -static_cast<double>(x);
            try {
                worst = std::max(worst, std::abs(mittag_leffler(q) - exact) / exact);
            } catch (const ConvergenceError& e) {
                worst = std::max(worst, e.achieved_error());
            }
        }
        checks.push_back(at_most("ml_erfc_identity", worst, 1e-8));
    }
    {
        const StableIndex idx(0.5);
        double tol = 0.0;
        const double err = mc_mean_check(
            samples, cfg, 0x5354ULL, [&](RngStream& r) { return std::exp(-sample_stable(idx, r)); }, std::exp(-1.0),
            tol);
        checks.push_back(at_most("stable_laplace", err, tol));
    }
    {
        const StableIndex idx(0.5);
        double tol = 0.0;
        const double err = mc_mean_check(
            samples, cfg, 0x494eULL, [&](RngStream& r) { return std::exp(-sample_inverse(idx, 1.0, r)); },
            mittag_leffler(0.5, -1.0), tol);
        checks.push_back(at_most("inverse_laplace", err, tol));
    }
    {
        double worst = 0.0;
        for (double b : {0.3, 0.7})
            for (double t : {0.5, 2.0})
                for (double l : {1.0, 10.0})
                    worst = std::max(worst, std::abs(h_eigen(OrderMeasure::caputo(b), t, l).value -
                                                     mittag_leffler(b, -l * std::pow(t, b), 1e-12)));
        checks.push_back(at_most("single_atom_collapse", worst, 1e-6));
    }
    const auto phi1 = InitialData::mode(ModeIndex{1});
    const auto coeffs = project(phi1, unit, default_max_mode(1));
    {
        std::vector<Point> pts;
        for (int i = 1; i < 10; ++i) pts.push_back({0.1 * i});
        const auto coarse = residual_check(coeffs, FractionalOrder{0.5}, 1e-3, 1.0, pts);
        const auto fine = residual_check(coeffs, FractionalOrder{0.5}, 5e-4, 1.0, pts);
        checks.push_back(at_least("residual_refinement", coarse.max_residual / fine.max_residual, 2.5));
    }
    const std::vector<Point> centre{{0.5}};
    for (const auto& [name, order] : {std::pair<std::string, TimeOrder>{"engine_fractional", FractionalOrder{0.5}},
                                      std::pair<std::string, TimeOrder>{"engine_distributed", two}}) {
        const auto s = solve(coeffs, order, 0.3, centre);
        const auto m = mc_solve(phi1, unit, order, 0.3, centre, mc);
        const double bias = 0.02 + (std::holds_alternative<OrderMeasure>(order) ? 2.0 * mc.dx : 0.0);
        checks.push_back(at_most(name, std::abs(m.values[0] - s.values[0]), 3.0 * m.std_errors[0] + bias));
    }

    std::ostringstream out;
    out << "check,measured,tolerance,status\n";
    bool ok = true;
    for (const auto& c : checks) {
        ok = ok && c.pass;
        out << c.name << ',' << format_number(c.measured) << ',' << format_number(c.tolerance) << ','
            << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    return {out.str(), ok};
}

CommandResult run_command(const RunConfig& cfg) {
    if (cfg.command == "ml") return cmd_ml(cfg);
    if (cfg.command == "sample") return cmd_sample(cfg);
    if (cfg.command == "eigen") return cmd_eigen(cfg);
    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "mc") return cmd_mc(cfg);
    if (cfg.command == "validate") return cmd_validate(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace fracdiff
