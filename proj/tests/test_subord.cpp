#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracdiff/errors.hpp"
#include "fracdiff/quadrature.hpp"
#include "fracdiff/specfun.hpp"
#include "fracdiff/subord.hpp"

using namespace fracdiff;

namespace {

template <class Draw>
SampleSummary mc(std::size_t n, std::uint64_t seed, Draw&& draw) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream r(seed, i);
        v[i] = draw(r);
    }
    return summarize(v);
}

// Integrates a density on (0, inf) in log coordinates.
template <class F>
double log_integral(F&& f, double log_hi = 200.0) {
    return integrate([&](double u) { const double x = std::exp(u); return x * f(x); }, -40.0, log_hi, 1e-14, 1e-12, {},
                     20000)
        .value;
}

}  // namespace

TEST_CASE("index validation") {
    CHECK_THROWS_AS(StableIndex(0.0), DomainError);
    CHECK_THROWS_AS(StableIndex(1.5), DomainError);
    CHECK(StableIndex(1.0).degenerate());
    CHECK_FALSE(StableIndex(0.99).degenerate());
}

TEST_CASE("beta = 1 is the deterministic clock") {
    RngStream r(1, 0);
    const StableIndex one(1.0);
    CHECK(sample_stable(one, r) == 1.0);
    CHECK(sample_stable_at(one, 2.5, r) == 2.5);
    CHECK(sample_inverse(one, 0.7, r) == 0.7);
}

TEST_CASE("Laplace transform of D(t)") {
    for (double beta : {0.3, 0.5, 0.8}) {
        const StableIndex idx(beta);
        for (double t : {1.0, 2.0}) {
            for (double s : {0.5, 2.0}) {
                const auto m = mc(200000, 11, [&](RngStream& r) { return std::exp(-s * sample_stable_at(idx, t, r)); });
                CHECK(std::abs(m.mean - std::exp(-t * std::pow(s, beta))) < 4.0 * m.std_error);
            }
        }
    }
}

TEST_CASE("inverse subordinator moments and Laplace transform") {
    for (double beta : {0.4, 0.7}) {
        const StableIndex idx(beta);
        const double t = 1.5;
        const auto first = mc(200000, 12, [&](RngStream& r) { return sample_inverse(idx, t, r); });
        CHECK(std::abs(first.mean - std::pow(t, beta) / std::tgamma(1.0 + beta)) < 4.0 * first.std_error);
        const auto lap = mc(200000, 13, [&](RngStream& r) { return std::exp(-3.0 * sample_inverse(idx, t, r)); });
        CHECK(std::abs(lap.mean - mittag_leffler(beta, -3.0 * std::pow(t, beta))) < 4.0 * lap.std_error);
    }
}

TEST_CASE("inverse is monotone in t for a fixed draw") {
    const StableIndex idx(0.6);
    CHECK(inverse_from_stable(idx, 1.0, 0.8) < inverse_from_stable(idx, 1.1, 0.8));
    CHECK(inverse_from_stable(idx, 1.0, 0.8) == doctest::Approx(std::pow(1.0 / 0.8, 0.6)));
}

TEST_CASE("Levy density at beta = 1/2") {
    // f(x) = x^{-3/2} exp(-1/(4x)) / (2 sqrt(pi)) has Laplace transform exp(-sqrt(s)).
    for (double x : {0.01, 0.2, 1.0, 7.0, 300.0}) {
        const double ref = std::pow(x, -1.5) * std::exp(-0.25 / x) / (2.0 * std::sqrt(std::numbers::pi));
        CHECK(stable_density(StableIndex(0.5), x) == doctest::Approx(ref).epsilon(1e-13));
        CHECK(stable_density_integral(0.5, x) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("density regimes agree and normalize") {
    for (double beta : {0.2, 0.45, 0.7, 0.9}) {
        for (double x : {1.5, 3.0, 10.0})
            CHECK(stable_density_integral(beta, x) == doctest::Approx(stable_density_series(beta, x)).epsilon(1e-9));
        const StableIndex idx(beta);
        CHECK(log_integral([&](double x) { return stable_density(idx, x); }) == doctest::Approx(1.0).epsilon(1e-9));
        for (double s : {0.5, 2.0})
            CHECK(log_integral([&](double x) { return std::exp(-s * x) * stable_density(idx, x); }, std::log(50.0 / s)) ==
                  doctest::Approx(std::exp(-std::pow(s, beta))).epsilon(1e-9));
    }
}

TEST_CASE("inverse density") {
    for (double beta : {0.3, 0.5, 0.8}) {
        const StableIndex idx(beta);
        for (double t : {0.5, 2.0}) {
            const double top = 80.0 * std::pow(t, beta);
            const auto norm = integrate([&](double l) { return inverse_density(idx, t, l); }, 0.0, top, 1e-13, 1e-11);
            CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-9));
            const auto lap =
                integrate([&](double l) { return std::exp(-2.0 * l) * inverse_density(idx, t, l); }, 0.0, top, 1e-13, 1e-11);
            CHECK(lap.value == doctest::Approx(mittag_leffler(beta, -2.0 * std::pow(t, beta), 1e-12)).epsilon(1e-9));
        }
    }
    // E(t) at beta = 1/2 is half-normal: (pi t)^{-1/2} exp(-l^2 / (4t)).
    for (double l : {0.1, 1.0, 3.0})
        CHECK(inverse_density(StableIndex(0.5), 1.3, l) ==
              doctest::Approx(std::exp(-l * l / 5.2) / std::sqrt(std::numbers::pi * 1.3)).epsilon(1e-12));
}

TEST_CASE("CTRW count converges to the inverse subordinator") {
    const double beta = 0.7, t = 1.0;
    const StableIndex idx(beta);
    const double c = 1e4, g = std::tgamma(1.0 - beta);
    const auto m = mc(20000, 14, [&](RngStream& r) { return ctrw_count(idx, c, t, r); });
    // Two-term renewal expansion of the Pareto walk: the leading correction is
    // O(c^{beta-1}), then the n = 0 renewal excluded from the count.
    const double expected = std::pow(t, beta) / std::tgamma(1.0 + beta) +
                            beta / ((1.0 - beta) * g) * std::pow(c, beta - 1.0) * std::pow(t, 2.0 * beta - 1.0) /
                                std::tgamma(2.0 * beta) -
                            g * std::pow(c, -beta);
    CHECK(std::abs(m.mean - expected) < 4.0 * m.std_error + std::pow(c, 2.0 * (beta - 1.0)));
    CHECK(m.mean > 1.0 / std::tgamma(1.0 + beta));
}

TEST_CASE("sampler preconditions") {
    RngStream r(0, 0);
    CHECK_THROWS_AS(sample_stable_at(StableIndex(0.5), 0.0, r), DomainError);
    CHECK_THROWS_AS(sample_inverse(StableIndex(0.5), -1.0, r), DomainError);
    CHECK_THROWS_AS(stable_density(StableIndex(1.0), 1.0), DomainError);
    CHECK_THROWS_AS(stable_density(StableIndex(0.5), 0.0), DomainError);
    CHECK_THROWS_AS(inverse_density(StableIndex(0.5), 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(ctrw_count(StableIndex(0.5), 0.5, 1.0, r), DomainError);
    CHECK_THROWS_AS(ctrw_count(StableIndex(0.5), 1e6, 1.0, r, 10), ResourceError);
}
