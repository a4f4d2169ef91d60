#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "fracdiff/parallel.hpp"
#include "fracdiff/rng.hpp"

using namespace fracdiff;

TEST_CASE("Philox4x32-10 known answer") {
    // Reference output for counter 0 and key 0.
    RngStream r(0, 0);
    CHECK(r.next_u64() == 0x6627e8d5e169c58dULL);
    CHECK(r.next_u64() == 0xbc57ac4c9b00dbd8ULL);
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        firsts.insert(x);
    }
    CHECK(firsts.size() == 100);
    CHECK(RngStream(42, 7).next_u64() != c.next_u64());
    CHECK(RngStream(42, 7).next_u64() != d.next_u64());
}

TEST_CASE("uniform is in the open unit interval with the right moments") {
    RngStream r(1, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(std::abs(s / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.003);
}

TEST_CASE("normal and exponential moments") {
    RngStream r(2, 0);
    const int n = 200000;
    std::vector<double> z(n), e(n);
    for (int i = 0; i < n; ++i) {
        z[i] = r.normal();
        e[i] = r.exponential();
    }
    const auto zs = summarize(z);
    CHECK(std::abs(zs.mean) < 4.0 * zs.std_error);
    CHECK(zs.std_error * std::sqrt(double(n)) == doctest::Approx(1.0).epsilon(0.01));
    const auto es = summarize(e);
    CHECK(std::abs(es.mean - 1.0) < 4.0 * es.std_error);
    double tail = 0;
    for (double v : z) tail += std::abs(v) > 1.959963984540054;
    CHECK(tail / n == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("pairwise summation") {
    std::vector<double> v(100001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / double(i + 1);
    long double ref = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) ref += *it;
    CHECK(std::abs(pairwise_sum(v) - double(ref)) < 1e-13);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("summary of a known sample") {
    const std::vector<double> v = {1, 2, 3, 4};
    const auto s = summarize(v);
    CHECK(s.n == 4);
    CHECK(s.mean == 2.5);
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK_THROWS(summarize(std::vector<double>{1.0}));
}

TEST_CASE("indexed map does not depend on the worker count") {
    auto f = [](std::size_t i) {
        RngStream r(9, i);
        return r.normal();
    };
    const auto one = map_indexed(1001, 1, f);
    for (unsigned t : {2u, 3u, 8u}) CHECK(map_indexed(1001, t, f) == one);
    CHECK_THROWS_AS(map_indexed(10, 4, [](std::size_t i) -> double {
                        if (i == 7) throw std::runtime_error("boom");
                        return 0.0;
                    }),
                    std::runtime_error);
}
