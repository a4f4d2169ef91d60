#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "fracdiff/cli.hpp"
#include "fracdiff/errors.hpp"
#include "fracdiff/specfun.hpp"

using namespace fracdiff;
namespace fs = std::filesystem;

namespace {

RunConfig make(const std::string& command, const std::string& text) {
    std::istringstream in(text);
    auto cfg = parse_config(in);
    cfg.command = command;
    return cfg;
}

std::vector<std::string> lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "fracdiff_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRACDIFF_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = make("solve", "# run\ndomain = 1 2\n  beta=0.5  # comment\nseed = 17\nthreads = 4\nout = u.csv\n");
    CHECK(cfg.numbers("domain") == std::vector<double>{1.0, 2.0});
    CHECK(cfg.number("beta", 0.0) == 0.5);
    CHECK(cfg.seed == 17);
    CHECK(cfg.threads == 4);
    CHECK(cfg.out == "u.csv");
    CHECK(cfg.count("missing", 7) == 7);
    CHECK(make("x", "n_paths = 1e5\n").count("n_paths", 0) == 100000);
    CHECK_THROWS_AS(make("x", "beta = 0.5\nbeta = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(make("x", "just words\n"), ConfigError);
    CHECK_THROWS_AS(make("x", "threads = 0\n"), ConfigError);
    CHECK_THROWS_AS(make("x", "beta = abc\n").number("beta", 0), ConfigError);
    CHECK_THROWS_AS(make("x", "n_paths = 2.5\n").count("n_paths", 0), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("initial data and point grammar") {
    const auto s = parse_initial("sum 2 1 3; -0.5 2 2", 2);
    REQUIRE(s.terms.size() == 2);
    CHECK(s.terms[1].weight == -0.5);
    CHECK(s.terms[1].mode == ModeIndex{2, 2});
    CHECK(parse_initial("bump", 3).kind == InitialData::Kind::bump);
    CHECK_THROWS_AS(parse_initial("mode 1 2", 1), ConfigError);
    CHECK_THROWS_AS(parse_initial("mode 0", 1), ConfigError);
    CHECK_THROWS_AS(parse_initial("mode 1.5", 1), ConfigError);
    CHECK_THROWS_AS(parse_initial("gauss", 1), ConfigError);
    CHECK_THROWS_AS(parse_initial("bump 3", 1), ConfigError);
    const auto pts = parse_points("0.5 0.25; 1 0", 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1] == Point{1.0, 0.0});
    const auto g = grid_points(BoxDomain({1.0, 2.0}), 3);
    REQUIRE(g.size() == 9);
    CHECK(g[1] == Point{0.0, 1.0});
    CHECK(g[8] == Point{1.0, 2.0});
}

TEST_CASE("ml command") {
    const auto r = cmd_ml(make("ml", "beta = 0.5\nx = 0 -1\n"));
    const auto l = lines(r.csv);
    REQUIRE(l.size() == 3);
    CHECK(l[0] == "beta,x,value");
    CHECK(l[1] == "0.5,0,1");
    CHECK(std::stod(l[2].substr(l[2].rfind(',') + 1)) == doctest::Approx(0.4275836).epsilon(1e-7));
    CHECK(lines(cmd_ml(make("ml", "beta = 1\nx = -1\n")).csv)[1] == "1,-1,0.36787944117144233");
    CHECK_THROWS_AS(cmd_ml(make("ml", "beta = 0.5\nx = 1\n")), ConfigError);
    CHECK_THROWS_AS(cmd_ml(make("ml", "beta = 0.5\nx = -1\ntimes = 1\n")), ConfigError);
}

TEST_CASE("solve command") {
    const auto r = cmd_solve(make("solve", "domain = 1\ninitial = mode 1\nbeta = 0.5\ntimes = 1\npoints = 0.5; 0\n"));
    const auto l = lines(r.csv);
    REQUIRE(l.size() == 3);
    CHECK(l[0] == "t,x1,value,tail_bound,engine");
    CHECK(l[1].rfind("1,0.5,", 0) == 0);
    CHECK(l[1].substr(l[1].size() - 8) == "spectral");
    const double v = std::stod(l[1].substr(6, l[1].find(',', 6) - 6));
    CHECK(v == doctest::Approx(mittag_leffler(0.5, -M_PI * M_PI) * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(l[2] == "1,0,0,0,spectral");
    const auto grid = cmd_solve(make("solve", "domain = 1 1\ninitial = bump\ntimes = 0.1 0.2\ngrid = 3\n"));
    CHECK(lines(grid.csv).size() == 1 + 2 * 9);
    CHECK(lines(grid.csv)[0] == "t,x1,x2,value,tail_bound,engine");
    CHECK_THROWS_AS(cmd_solve(make("solve", "domain = 1\ninitial = mode 1\ntimes =\npoints = 0.5\n")), ConfigError);
    CHECK_THROWS_AS(cmd_solve(make("solve", "domain = 1\ninitial = mode 1\ntimes = 1\npoints = 1.5\n")), ConfigError);
    CHECK_THROWS_AS(cmd_solve(make("solve", "domain = 1\ninitial = mode 1\ntimes = 1\npoints = 0.5\nn_paths = 5\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        cmd_solve(make("solve", "domain = 1\ninitial = mode 1\ntimes = 1\npoints = 0.5\nmeasure = /nonexistent\n")),
        ConfigError);
}

TEST_CASE("measure-driven commands") {
    const auto path = scratch() / "two.msr";
    std::ofstream(path) << "atom 0.3 0.5\natom 0.7 0.5\n";
    const auto e = cmd_eigen(make("eigen", "measure = " + path.string() + "\ntimes = 1\nlambda = 1 5\n"));
    REQUIRE(lines(e.csv).size() == 3);
    CHECK(lines(e.csv)[0] == "t,lambda,value,est_error");
    const auto mc = cmd_mc(make("mc", "domain = 1\ninitial = mode 1\nmeasure = " + path.string() +
                                          "\ntimes = 0.3\npoints = 0.5\nn_paths = 200\n"));
    CHECK(lines(mc.csv)[0] == "t,x1,value,tail_bound,engine,stderr");
    CHECK(lines(mc.csv)[1].find(",montecarlo,") != std::string::npos);
    const auto s = cmd_sample(make("sample", "sampler = composite\nmeasure = " + path.string() + "\ncount = 4\n"));
    CHECK(lines(s.csv).size() == 5);
    CHECK_THROWS_AS(cmd_sample(make("sample", "sampler = nope\nbeta = 0.5\n")), ConfigError);
}

TEST_CASE("validate command") {
    const auto ok = cmd_validate(make("validate", "n_paths = 2000\nsamples = 20000\n"));
    CHECK(ok.ok);
    CHECK(lines(ok.csv)[0] == "check,measured,tolerance,status");
    const auto bad = cmd_validate(make("validate", "n_paths = 2000\nsamples = 20000\ntest_hook = corrupt_ml_switch\n"));
    CHECK_FALSE(bad.ok);
    bool flagged = false;
    for (const auto& l : lines(bad.csv)) flagged = flagged || (l.rfind("ml_erfc_identity,", 0) == 0 && l.find("FAIL") != std::string::npos);
    CHECK(flagged);
    CHECK_THROWS_AS(cmd_validate(make("validate", "measure = /nonexistent/m.msr\n")), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    for (double v : {-2.5e-300, 1.0 / 3.0, 6.02214076e23, 5e-324}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
}

TEST_CASE("executable exit codes and output") {
    const auto dir = scratch();
    const auto out = dir / "ml.csv";
    CHECK(run_cli("ml beta=0.5 \"x=0 -1\" --out " + out.string()) == 0);
    std::ifstream in(out, std::ios::binary);
    const std::string body((std::istreambuf_iterator<char>(in)), {});
    CHECK(body == "beta,x,value\n0.5,0,1\n0.5,-1,0.42758357615519671\n");
    CHECK(body.find('\r') == std::string::npos);
    CHECK(run_cli("validate measure=/nonexistent/m.msr") == 2);
    CHECK(run_cli("validate n_paths=500 samples=1000 test_hook=corrupt_ml_switch") == 1);
    CHECK(run_cli("frobnicate") != 0);
    CHECK(run_cli("solve --config /nonexistent.cfg") != 0);
    const auto cfg = dir / "bad.cfg";
    std::ofstream(cfg) << "domain = 1\ninitial = bump\ntimes = 0.001\npoints = 0.5\nmodes = 2\n";
    CHECK(run_cli("solve --config " + cfg.string()) == 1);
}
