#include <cmath>
#include <limits>

#include "doctest.h"
#include "mscycles/hp_filter.hpp"
#include "mscycles/model.hpp"
#include "mscycles/rng.hpp"
#include "oracles.hpp"

using namespace mscycles;

TEST_CASE("constant series is its own trend") {
  const std::vector<double> series(5, 5.0);
  const HpResult result = hp_decompose(series, {100.0});
  for (double c : result.cycle) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("linear series has zero cycle at every lambda") {
  std::vector<double> series;
  for (int t = 0; t < 25; ++t) series.push_back(2.0 + 3.0 * t);
  for (double lambda : {0.0, 6.25, 100.0, 1600.0}) {
    const HpResult result = hp_decompose(series, {lambda});
    for (double c : result.cycle) CHECK(std::abs(c) < 1e-10);
  }
}

TEST_CASE("matches the dense linear-solve oracle") {
  Rng rng(42);
  std::vector<double> series;
  for (int t = 0; t < 12; ++t) series.push_back(rng.normal());
  const HpResult result = hp_decompose(series, {100.0});
  const auto expected = oracles::dense_hp_trend(series, 100.0);
  for (std::size_t i = 0; i < series.size(); ++i)
    CHECK(std::abs(result.trend[i] - expected[i]) < 1e-10);
}

TEST_CASE("dense oracle agreement across sizes and penalties") {
  Rng rng(7);
  for (int n : {4, 5, 6, 9, 30, 51}) {
    std::vector<double> series;
    for (int t = 0; t < n; ++t) series.push_back(3.0 * rng.normal() + 0.2 * t);
    for (double lambda : {0.5, 6.25, 1600.0}) {
      const HpResult result = hp_decompose(series, {lambda});
      const auto expected = oracles::dense_hp_trend(series, lambda);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(result.trend[i] - expected[i]) < 1e-9);
    }
  }
}

TEST_CASE("trend plus cycle reconstructs the input") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> series;
    const int n = 10 + static_cast<int>(rng.uniform() * 60);
    for (int t = 0; t < n; ++t) series.push_back(10.0 * rng.normal());
    const HpResult result = hp_decompose(series, {100.0});
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(result.trend[i] + result.cycle[i] - series[i]) < 1e-12);
  }
}

TEST_CASE("lambda zero returns the input as trend, exactly") {
  Rng rng(11);
  std::vector<double> series;
  for (int t = 0; t < 17; ++t) series.push_back(rng.normal());
  const HpResult result = hp_decompose(series, {0.0});
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(result.trend[i] == series[i]);
    CHECK(result.cycle[i] == 0.0);
  }
}

TEST_CASE("large lambda approaches the least-squares line") {
  Rng rng(19);
  const int n = 20;
  std::vector<double> series;
  for (int t = 0; t < n; ++t) series.push_back(1.5 + 0.3 * t + rng.normal());

  // closed-form OLS line fit
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (int t = 0; t < n; ++t) {
    st += t;
    sy += series[t];
    stt += static_cast<double>(t) * t;
    sty += t * series[t];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double intercept = (sy - slope * st) / n;

  const HpResult result = hp_decompose(series, {1e9});
  for (int t = 0; t < n; ++t)
    CHECK(std::abs(result.trend[t] - (intercept + slope * t)) < 1e-3);
}

TEST_CASE("deterministic: identical input bits give identical output bits") {
  Rng rng(5);
  std::vector<double> series;
  for (int t = 0; t < 40; ++t) series.push_back(rng.normal());
  const HpResult a = hp_decompose(series, {100.0});
  const HpResult b = hp_decompose(series, {100.0});
  for (int i = 0; i < 40; ++i) {
    CHECK(a.trend[i] == b.trend[i]);
    CHECK(a.cycle[i] == b.cycle[i]);
  }
}

TEST_CASE("rejects short or non-finite input") {
  CHECK_THROWS_AS(hp_decompose({1.0, 2.0, 3.0}, {100.0}), validation_error);
  CHECK_THROWS_AS(
      hp_decompose({1.0, 2.0, std::numeric_limits<double>::quiet_NaN(), 4.0}, {100.0}),
      validation_error);
  CHECK_THROWS_AS(hp_decompose({1.0, 2.0, 3.0, 4.0}, {-1.0}), validation_error);
  CHECK_THROWS_AS(
      hp_decompose({1.0, 2.0, 3.0, 4.0},
                   {std::numeric_limits<double>::infinity()}),
      validation_error);
}
