#include <doctest.h>

#include <cmath>
#include <set>

#include "homoglab/rng.hpp"

using namespace homoglab;

TEST_CASE("mix64 is deterministic and spreads nearby keys") {
    CHECK(rng::mix64(0) == rng::mix64(0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(rng::mix64(i));
    CHECK(seen.size() == 1000);
}

TEST_CASE("u01 stays in [0,1) and has a sane mean") {
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng::u01(rng::mix64(i));
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        acc += u;
    }
    CHECK(std::fabs(acc / n - 0.5) < 0.01);
}

TEST_CASE("hash_cell distinguishes coordinate order and streams") {
    const std::int64_t ab[2] = {1, 0};
    const std::int64_t ba[2] = {0, 1};
    CHECK(rng::hash_cell(7, rng::kStreamChecker, ab) !=
          rng::hash_cell(7, rng::kStreamChecker, ba));
    CHECK(rng::hash_cell(7, rng::kStreamChecker, ab) !=
          rng::hash_cell(7, rng::kStreamStripe, ab));
}

TEST_CASE("counter sequence is reproducible") {
    rng::Sequence a{42};
    rng::Sequence b{42};
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("poisson sampler mean tracks lambda") {
    for (double lambda : {0.5, 2.0, 8.0}) {
        double acc = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            rng::Sequence seq{rng::mix64(i)};
            acc += rng::poisson(seq, lambda);
        }
        CHECK(std::fabs(acc / n - lambda) < 0.1 * std::max(1.0, lambda));
    }
}

TEST_CASE("box-muller fixture has unit variance") {
    rng::Sequence seq{123};
    double m = 0, m2 = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng::normal(seq);
        m += x;
        m2 += x * x;
    }
    m /= n;
    m2 /= n;
    CHECK(std::fabs(m) < 0.03);
    CHECK(std::fabs(m2 - 1.0) < 0.05);
}
