#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracdiff/cli.hpp"
#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double to_number(const std::string& key, const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': not a number: '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(v)) throw ConfigError("'" + key + "': not a number: '" + token + "'");
    return v;
}

std::vector<double> to_numbers(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.push_back(to_number(key, token));
    return out;
}

std::uint64_t to_count(const std::string& key, const std::string& token) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
        // Allow scientific notation for large integral counts such as 1e5.
        const double v = to_number(key, token);
        if (v < 0.0 || v != std::floor(v) || v > 1.8e19) throw ConfigError("'" + key + "': expected a count");
        return static_cast<std::uint64_t>(v);
    }
    try {
        return std::stoull(token);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': count out of range");
    }
}

ModeIndex to_mode(const std::vector<double>& comps, std::size_t dim, const std::string& spec) {
    if (comps.size() != dim) throw ConfigError("initial: mode '" + spec + "' does not match the domain dimension");
    ModeIndex n;
    n.d = dim;
    for (std::size_t a = 0; a < dim; ++a) {
        if (comps[a] < 1.0 || comps[a] != std::floor(comps[a]) || comps[a] > 1e6)
            throw ConfigError("initial: mode indices must be positive integers");
        n.n[a] = static_cast<int>(comps[a]);
    }
    return n;
}

}  // namespace

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double RunConfig::number(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : to_number(key, it->second);
}

std::size_t RunConfig::count(const std::string& key, std::size_t fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : static_cast<std::size_t>(to_count(key, it->second));
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? std::vector<double>{} : to_numbers(key, it->second);
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto k = trim(key);
    const auto v = trim(value);
    if (k.empty()) throw ConfigError("empty key");
    if (k == "seed") {
        seed = to_count(k, v);
    } else if (k == "threads") {
        const auto n = to_count(k, v);
        if (n < 1 || n > 1024) throw ConfigError("'threads' must lie in [1, 1024]");
        threads = static_cast<unsigned>(n);
    } else if (k == "out") {
        out = v;
    } else if (k == "command") {
        command = v;
    } else {
        values[k] = v;
    }
}

void RunConfig::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [key, _] : values)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("key '" + key + "' is not used by command '" + command + "'");
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (seen.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        seen[key] = lineno;
        cfg.set(key, line.substr(eq + 1));
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

InitialData parse_initial(const std::string& spec, std::size_t dim) {
    std::istringstream in(spec);
    std::string kind;
    in >> kind;
    std::string rest;
    std::getline(in, rest);
    if (kind == "bump") {
        if (!trim(rest).empty()) throw ConfigError("initial: 'bump' takes no arguments");
        return InitialData::bump();
    }
    if (kind == "mode") return InitialData::mode(to_mode(to_numbers("initial", rest), dim, spec));
    if (kind == "sum") {
        std::vector<InitialData::Term> terms;
        for (const auto& part : split(rest, ';')) {
            auto nums = to_numbers("initial", part);
            if (nums.empty()) throw ConfigError("initial: empty term in '" + spec + "'");
            const double w = nums.front();
            nums.erase(nums.begin());
            terms.push_back({w, to_mode(nums, dim, part)});
        }
        if (terms.empty()) throw ConfigError("initial: 'sum' needs at least one term");
        return InitialData::sum(std::move(terms));
    }
    throw ConfigError("initial: unknown kind '" + kind + "' (expected mode, sum or bump)");
}

std::vector<Point> parse_points(const std::string& spec, std::size_t dim) {
    std::vector<Point> pts;
    for (const auto& part : split(spec, ';')) {
        if (part.empty()) continue;
        auto p = to_numbers("points", part);
        if (p.size() != dim) throw ConfigError("points: '" + part + "' does not match the domain dimension");
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Point> grid_points(const BoxDomain& dom, std::size_t n) {
    if (n < 2) throw ConfigError("grid: need at least two nodes per axis");
    const std::size_t d = dom.dim();
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= n;
    std::vector<Point> pts;
    pts.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p(d);
        std::size_t rem = flat;
        for (std::size_t a = d; a-- > 0;) {
            p[a] = dom.length(a) * double(rem % n) / double(n - 1);
            rem /= n;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

Scenario resolve_scenario(const RunConfig& cfg, bool monte_carlo) {
    Scenario sc;
    const auto lengths = cfg.numbers("domain");
    if (lengths.empty()) throw ConfigError("'domain' is required (box side lengths)");
    try {
        sc.domain = BoxDomain(lengths);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    const std::size_t d = sc.domain.dim();

    if (!cfg.has("initial")) throw ConfigError("'initial' is required");
    sc.initial = parse_initial(cfg.text("initial", ""), d);

    if (cfg.has("beta") && cfg.has("measure")) throw ConfigError("give either 'beta' or 'measure', not both");
    if (cfg.has("measure")) {
        auto m = load_measure(cfg.text("measure", ""));
        try {
            validate_measure(m);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("measure: ") + e.what());
        }
        if (monte_carlo && !m.atoms_only()) throw ConfigError("measure: the Monte-Carlo engine needs atoms only");
        sc.order = std::move(m);
    } else if (cfg.has("beta")) {
        const double beta = cfg.number("beta", 1.0);
        if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("'beta' must lie in (0, 1]");
        if (beta == 1.0) sc.order = ClassicalOrder{};
        else sc.order = FractionalOrder{beta};
    }

    sc.times = cfg.numbers("times");
    if (sc.times.empty()) throw ConfigError("'times' must list at least one time");
    for (double t : sc.times)
        if (!(t > 0.0)) throw ConfigError("'times' must be positive");

    if (cfg.has("points") && cfg.has("grid")) throw ConfigError("give either 'points' or 'grid', not both");
    if (cfg.has("grid")) sc.points = grid_points(sc.domain, cfg.count("grid", 0));
    else sc.points = parse_points(cfg.text("points", ""), d);
    if (sc.points.empty()) throw ConfigError("'points' or 'grid' must give at least one point");
    for (const auto& p : sc.points)
        if (!sc.domain.contains_closed(p)) throw ConfigError("points: every point must lie in the closed box");

    const auto mm = cfg.count("modes", std::size_t(default_max_mode(d)));
    if (mm < 1 || mm > 4096) throw ConfigError("'modes' must lie in [1, 4096]");
    sc.max_mode = static_cast<int>(mm);
    if (sc.initial.kind == InitialData::Kind::modes)
        for (const auto& term : sc.initial.terms)
            for (std::size_t a = 0; a < d; ++a)
                if (term.mode.n[a] > sc.max_mode) throw ConfigError("initial: mode index exceeds 'modes'");

    sc.tolerance = cfg.number("tolerance", kSeriesTolerance);
    if (!(sc.tolerance > 0.0)) throw ConfigError("'tolerance' must be positive");

    if (monte_carlo) {
        sc.mc.n_paths = cfg.count("n_paths", sc.mc.n_paths);
        sc.mc.dt = cfg.number("dt", sc.mc.dt);
        sc.mc.dx = cfg.number("dx", sc.mc.dx);
        sc.mc.budget = cfg.count("budget", sc.mc.budget);
        sc.mc.seed = cfg.seed;
        sc.mc.threads = cfg.threads;
        try {
            sc.mc.validate(sc.domain);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    return sc;
}

}  // namespace fracdiff
