#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracdiff/mcsolver.hpp"
#include "fracdiff/solver.hpp"

namespace fracdiff {

inline const std::vector<std::string> kCommands = {"ml", "sample", "eigen", "solve", "mc", "validate"};

/// Flat key/value run description. Keys are free-form until a command
/// resolves them; unknown keys are rejected at that point.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::optional<std::string> out;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string text(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
    std::vector<double> numbers(const std::string& key) const;

    /// Applies `key=value`; seed, threads and out are routed to their fields.
    void set(const std::string& key, const std::string& value);
    /// Throws ConfigError naming the first key not in `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;
};

/// Reads `key = value` lines; `#` starts a comment. Duplicate keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Everything a solve/mc run needs, checked against each module's
/// preconditions before any computation starts.
struct Scenario {
    BoxDomain domain{std::vector<double>{1.0}};
    InitialData initial = InitialData::mode(ModeIndex{1});
    TimeOrder order = ClassicalOrder{};
    std::vector<double> times;
    std::vector<Point> points;
    int max_mode = 0;
    double tolerance = kSeriesTolerance;
    McConfig mc;
};

Scenario resolve_scenario(const RunConfig& cfg, bool monte_carlo);

/// Parses the initial-data grammar: `mode n1 [n2 [n3]]`, `bump`, or
/// `sum w n1 [n2 [n3]]; w n1 ...`.
InitialData parse_initial(const std::string& spec, std::size_t dim);

/// Parses `x1 [x2 [x3]]; ...` into points.
std::vector<Point> parse_points(const std::string& spec, std::size_t dim);

/// Uniform per-axis grid of `n` nodes including both faces, last axis fastest.
std::vector<Point> grid_points(const BoxDomain& dom, std::size_t n);

struct CommandResult {
    std::string csv;
    /// False when a requested computation missed its error contract.
    bool ok = true;
};

CommandResult cmd_ml(const RunConfig& cfg);
CommandResult cmd_sample(const RunConfig& cfg);
CommandResult cmd_eigen(const RunConfig& cfg);
CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_mc(const RunConfig& cfg);
CommandResult cmd_validate(const RunConfig& cfg);

CommandResult run_command(const RunConfig& cfg);

/// 17 significant digits, `.` separator.
std::string format_number(double v);

}  // namespace fracdiff
