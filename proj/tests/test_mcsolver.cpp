#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/mcsolver.hpp"
#include "fracdiff/specfun.hpp"

using namespace fracdiff;
using std::numbers::pi;

namespace {

const BoxDomain kSeg({1.0});
const InitialData kPhi1 = InitialData::mode(ModeIndex{1});

McConfig config(std::size_t n, std::uint64_t seed) {
    McConfig cfg;
    cfg.n_paths = n;
    cfg.seed = seed;
    return cfg;
}

// P_x(tau > t) on (0,1): sum over odd n of 4/(n pi) sin(n pi x) e^{-n^2 pi^2 t}.
double survival(double x, double t) {
    double s = 0.0;
    for (int n = 1; n < 200; n += 2) s += 4.0 / (n * pi) * std::sin(n * pi * x) * std::exp(-n * n * pi * pi * t);
    return s;
}

}  // namespace

TEST_CASE("zero clock does not move") {
    RngStream r(1, 0);
    const Point x0{0.25};
    const auto p = run_killed_bm(kSeg, x0, 0.0, config(100, 0), r);
    CHECK(p.alive);
    CHECK(p.endpoint == x0);
    CHECK(p.steps == 0);
}

TEST_CASE("increment variance is 2 dt per axis") {
    const BoxDomain wide({1e3, 1e3});
    const Point x0{500.0, 500.0};
    const double clock = 0.5;
    std::vector<double> dx2(20000), dy(20000);
    for (std::size_t i = 0; i < dx2.size(); ++i) {
        RngStream r(2, i);
        const auto p = run_killed_bm(wide, x0, clock, config(100, 0), r);
        REQUIRE(p.alive);
        dx2[i] = std::pow(p.endpoint[0] - 500.0, 2);
        dy[i] = p.endpoint[1] - 500.0;
    }
    const auto v = summarize(dx2);
    CHECK(std::abs(v.mean - 2.0 * clock) < 4.0 * v.std_error);
    CHECK(std::abs(summarize(dy).mean) < 4.0 * summarize(dy).std_error);
}

TEST_CASE("survival probability against the spectral series") {
    const double t = 0.05;
    auto cfg = config(20000, 3);
    std::vector<double> alive(cfg.n_paths);
    for (std::size_t i = 0; i < alive.size(); ++i) {
        RngStream r(3, i);
        alive[i] = run_killed_bm(kSeg, Point{0.3}, t, cfg, r).alive ? 1.0 : 0.0;
    }
    const auto s = summarize(alive);
    // Discrete monitoring misses excursions, so survival is biased upward by O(sqrt(dt)).
    CHECK(std::abs(s.mean - survival(0.3, t)) < 3.0 * s.std_error + 0.02);
    CHECK(s.mean > survival(0.3, t) - 3.0 * s.std_error);
}

TEST_CASE("beta = 1 is plain killed Brownian motion") {
    const auto e = mc_solve_fractional(kPhi1, kSeg, 1.0, 0.1, Point{0.5}, config(20000, 4));
    const double exact = std::exp(-pi * pi * 0.1) * std::sqrt(2.0);
    CHECK(std::abs(e.estimate - exact) < 3.0 * e.std_error + 0.02);
    CHECK(e.n_paths == 20000);
}

TEST_CASE("fractional clock against the spectral value") {
    const auto e = mc_solve_fractional(kPhi1, kSeg, 0.5, 0.3, Point{0.5}, config(20000, 5));
    const double exact = mittag_leffler(0.5, -pi * pi * std::sqrt(0.3)) * std::sqrt(2.0);
    CHECK(std::abs(e.estimate - exact) < 3.0 * e.std_error + 0.02);
}

TEST_CASE("single-atom distributed clock reduces to the fractional one") {
    auto cfg = config(10000, 6);
    const auto frac = mc_solve_fractional(kPhi1, kSeg, 0.6, 0.2, Point{0.4}, cfg);
    const auto dist = mc_solve_distributed(kPhi1, kSeg, OrderMeasure::caputo(0.6), 0.2, Point{0.4}, cfg);
    const double se = std::hypot(frac.std_error, dist.std_error);
    CHECK(std::abs(frac.estimate - dist.estimate) < 3.0 * se + 2.0 * cfg.dx);
}

TEST_CASE("zero data and bounded data") {
    const auto zero = mc_solve_fractional(InitialData::sum({{0.0, ModeIndex{1}}}), kSeg, 0.5, 0.3, Point{0.5},
                                          config(1000, 7));
    CHECK(zero.estimate == 0.0);
    CHECK(zero.std_error == 0.0);
    const auto b = mc_solve_fractional(InitialData::bump(), kSeg, 0.7, 0.2, Point{0.5}, config(2000, 7));
    CHECK(b.estimate >= -3.0 * b.std_error);
    CHECK(b.estimate <= 0.25 + 3.0 * b.std_error);
}

TEST_CASE("field sample over points") {
    const BoxDomain sq({1.0, 1.0});
    const std::vector<Point> pts{{0.5, 0.5}, {0.0, 0.5}, {0.25, 0.75}};
    const auto u = mc_solve(InitialData::mode(ModeIndex{1, 1}), sq, FractionalOrder{0.5}, 0.1, pts, config(2000, 8));
    CHECK(u.engine == Engine::montecarlo);
    REQUIRE(u.values.size() == 3);
    CHECK(u.values[1] == 0.0);
    CHECK(u.std_errors[1] == 0.0);
    CHECK(u.std_errors[0] > 0.0);
}

TEST_CASE("thread count does not change the estimate") {
    auto cfg = config(3000, 9);
    const OrderMeasure two({{0.3, 0.5}, {0.7, 0.5}});
    const auto one = mc_solve_distributed(kPhi1, kSeg, two, 0.3, Point{0.5}, cfg);
    cfg.threads = 8;
    const auto many = mc_solve_distributed(kPhi1, kSeg, two, 0.3, Point{0.5}, cfg);
    CHECK(one.estimate == many.estimate);
    CHECK(one.std_error == many.std_error);
}

TEST_CASE("configuration and preconditions") {
    auto cfg = config(50, 0);
    CHECK_THROWS_AS(cfg.validate(kSeg), ValidationError);
    cfg = config(100, 0);
    cfg.dt = 2e-3;
    CHECK_THROWS_AS(cfg.validate(kSeg), ValidationError);
    cfg = config(1000, 0);
    cfg.resource_cap = 1e9;
    CHECK_THROWS_AS(cfg.validate(kSeg), ValidationError);
    CHECK_THROWS_AS(mc_solve_fractional(kPhi1, kSeg, 0.5, 0.3, Point{0.0}, config(100, 0)), ValidationError);
    CHECK_THROWS_AS(mc_solve_fractional(kPhi1, kSeg, 0.5, 0.0, Point{0.5}, config(100, 0)), DomainError);
    CHECK_THROWS_AS(mc_solve_distributed(kPhi1, kSeg, OrderMeasure({}, DensityPart{}), 0.3, Point{0.5}, config(100, 0)),
                    ValidationError);
    cfg = config(100, 0);
    cfg.budget = 10;
    CHECK_THROWS_AS(mc_solve_fractional(kPhi1, BoxDomain({100.0}), 1.0, 1.0, Point{50.0}, cfg), ResourceError);
}
