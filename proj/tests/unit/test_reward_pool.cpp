#include <algorithm>
#include <cmath>
#include <map>

#include "corebandit/errors.hpp"
#include "corebandit/reward_pool.hpp"
#include "corebandit/rng.hpp"
#include "doctest.h"

using namespace corebandit;

TEST_CASE("pool from (0, 1)") {
  const std::vector<double> y{0.0, 1.0};
  const auto pool = build_pool(y, 1.0);
  const std::vector<double> expected{-0.5, 0.5, 0.5, -0.5};
  CHECK(std::vector<double>(pool.values().begin(), pool.values().end()) == expected);
  CHECK(pool.source_mean() == 0.5);
  CHECK(pool_variance(pool) == 0.25);

  const auto scaled = build_pool(y, 2.0);
  const std::vector<double> expected2{-1.0, 1.0, 1.0, -1.0};
  CHECK(std::vector<double>(scaled.values().begin(), scaled.values().end()) == expected2);
  CHECK(pool_variance(scaled) == 1.0);
}

TEST_CASE("constant rewards collapse the pool") {
  const std::vector<double> y(7, 0.3);
  const auto pool = build_pool(y, 0.6);
  for (const double v : pool.values()) CHECK(v == 0.0);
  CHECK(pool_variance(pool) == 0.0);
}

TEST_CASE("pool errors") {
  CHECK_THROWS_AS(build_pool({}, 1.0), EmptyHistory);
  const std::vector<double> y{1.0};
  CHECK_THROWS_AS(build_pool(y, 0.0), ParameterError);
  RewardPool empty;
  Rng rng(1);
  CHECK_THROWS_AS(empty.draw(rng), EmptyPool);
  CHECK(pool_variance(empty) == 0.0);
  CHECK(build_pool(y, 1.0).draw(0, rng).empty());
}

TEST_CASE("pool properties on random histories") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.index(300);
    std::vector<double> y(m);
    for (auto& v : y) v = rng.normal(rng.uniform(), 0.7);
    const double alpha = 0.1 + 2.0 * rng.uniform();
    const auto pool = build_pool(y, alpha);
    REQUIRE(pool.size() == 2 * m);

    double sum = 0, maxabs = 0;
    for (const double v : pool.values()) {
      sum += v;
      maxabs = std::max(maxabs, std::abs(v));
    }
    CHECK(std::abs(sum / pool.size()) <= 1e-12 * std::max(1.0, maxabs));

    std::vector<double> sorted(pool.values().begin(), pool.values().end());
    std::vector<double> negated(sorted);
    for (auto& v : negated) v = -v;
    std::sort(sorted.begin(), sorted.end());
    std::sort(negated.begin(), negated.end());
    CHECK(sorted == negated);

    // Variance identity: mean of squares equals alpha^2 / m * sum (Y - mu)^2.
    double mu = 0;
    for (const double v : y) mu += v;
    mu /= m;
    double ss = 0;
    for (const double v : y) ss += (v - mu) * (v - mu);
    const double oracle = alpha * alpha * ss / m;
    CHECK(pool_variance(pool) == doctest::Approx(oracle).epsilon(1e-10));

    // Alpha enters quadratically.
    const auto doubled = build_pool(y, 2 * alpha);
    CHECK(pool_variance(doubled) == doctest::Approx(4 * pool_variance(pool)).epsilon(1e-12));
  }
}

TEST_CASE("draws are uniform over entries") {
  const std::vector<double> y{0.0, 1.0, 3.0};
  const auto pool = build_pool(y, 1.0);
  Rng rng(5);
  const std::size_t n = 600000;
  const auto draws = pool.draw(n, rng);
  std::map<double, std::size_t> counts;
  for (const double d : draws) ++counts[d];
  // Entries: +/-(4/3), +/-(1/3), +/-(5/3); each value appears once.
  CHECK(counts.size() == 6);
  for (const auto& [v, c] : counts) CHECK(std::abs(double(c) - n / 6.0) < 4 * std::sqrt(n / 6.0));

  Rng a(8), b(8);
  double s = 0;
  for (int i = 0; i < 17; ++i) s += pool.draw(a);
  CHECK(pool.draw_sum(17, b) == doctest::Approx(s).epsilon(1e-15));
}
