#include <cmath>

#include "doctest.h"
#include "mscycles/diagnostics.hpp"
#include "mscycles/monte_carlo.hpp"
#include "mscycles/rng.hpp"
#include "oracles.hpp"

using namespace mscycles;

TEST_CASE("near-deterministic dynamics decay at the dominant eigenvalue rate") {
  MsVarModel m;
  m.regime1 = RegimeCoefficients::full(0.7, 0.0, 0.0, 0.4);
  m.regime2 = RegimeCoefficients::diagonal(0.7, 0.4);
  m.sigma1 = {1e-12, 0.0, 1e-12};
  m.sigma2 = {1e-12, 0.0, 1e-12};
  m.trans = {1.0, 0.0, 0.0, 1.0};
  m.init_dist = {1.0, 0.0};

  SimOptions opts;
  opts.burn_in = 0;
  opts.start = {1.0, 0.0};
  const SimulatedSeries sim = simulate(m, 25, 123, opts);

  CHECK(sim.series.y[0] == 1.0);  // the start itself, no shock applied yet
  for (int t = 0; t < 20; ++t) {
    const double norm_now = std::hypot(sim.series.y[t], sim.series.f[t]);
    const double norm_next = std::hypot(sim.series.y[t + 1], sim.series.f[t + 1]);
    CHECK(norm_next / norm_now == doctest::Approx(0.7).epsilon(0.05));
  }
}

TEST_CASE("absorbing chain keeps a constant regime path") {
  MsVarModel m = oracles::usa_nfcd_model();
  m.trans = {1.0, 0.0, 0.0, 1.0};
  m.init_dist = {1.0, 0.0};
  const SimulatedSeries sim = simulate(m, 50, 7);
  for (int regime : sim.regimes) CHECK(regime == 1);
}

TEST_CASE("simulated transition frequencies match the chain") {
  const MsVarModel m = oracles::usa_nfcd_model();
  const SimulatedSeries sim = simulate(m, 10000, 31);
  double count[2][2] = {{0, 0}, {0, 0}};
  double from[2] = {0, 0};
  for (std::size_t t = 1; t < sim.regimes.size(); ++t) {
    const int i = sim.regimes[t - 1] - 1;
    const int j = sim.regimes[t] - 1;
    count[i][j] += 1.0;
    from[i] += 1.0;
  }
  CHECK(std::abs(count[0][0] / from[0] - m.trans.p11) < 0.02);
  CHECK(std::abs(count[0][1] / from[0] - m.trans.p12) < 0.02);
  CHECK(std::abs(count[1][0] / from[1] - m.trans.p21) < 0.02);
  CHECK(std::abs(count[1][1] / from[1] - m.trans.p22) < 0.02);
}

TEST_CASE("simulate produces a valid contiguous pair aligned with its path") {
  const SimulatedSeries sim = simulate(oracles::usa_nfcd_model(), 60, 3);
  CHECK(sim.series.violations().empty());
  CHECK(sim.series.size() == 60);
  CHECK(sim.regimes.size() == 60);
  CHECK(sim.series.years.front() == 1);
  CHECK(sim.series.years.back() == 60);
}

TEST_CASE("unit-noise simulation ignores the model covariances") {
  MsVarModel m = oracles::usa_nfcd_model();
  m.sigma1 = {25.0, 0.0, 25.0};
  m.sigma2 = {25.0, 0.0, 25.0};
  SimOptions scaled, unit;
  unit.unit_noise = true;
  const SimulatedSeries a = simulate(m, 2000, 11, scaled);
  const SimulatedSeries b = simulate(m, 2000, 11, unit);
  auto sd = [](const std::vector<double>& v) {
    double mean = 0.0, var = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / v.size());
  };
  CHECK(sd(a.series.y) > 3.0 * sd(b.series.y));  // shocks are 5x wider when scaled
}

TEST_CASE("simulate rejects a covariance without a Cholesky factor") {
  MsVarModel m = oracles::usa_nfcd_model();
  m.sigma1 = {1.0, 1.0, 1.0};  // singular
  CHECK_THROWS_AS(simulate(m, 50, 1), std::exception);
}

TEST_CASE("mc_study: structural contract on an easy configuration") {
  MsVarModel gen;
  gen.regime1 = RegimeCoefficients::full(0.2, -0.8, 0.8, 0.2);
  gen.regime2 = RegimeCoefficients::diagonal(0.9, 0.9);
  gen.sigma1 = {0.04, 0.0, 0.04};
  gen.sigma2 = {1.0, 0.0, 1.0};
  gen.trans = {0.95, 0.05, 0.05, 0.95};
  gen.init_dist = ergodic_distribution(gen.trans);

  EstimateConfig est;
  est.restarts = 2;
  est.max_iter = 400;
  const McSummary s = mc_study(gen, 2, 120, 2024, est);
  CHECK(s.n_total == 2);
  CHECK(s.n_success == 2);
  REQUIRE(s.means.size() == kNumFreeParams);
  for (int p = 0; p < kNumFreeParams; ++p) {
    CHECK(s.ci_low[p] <= s.means[p] + 1e-12);
    CHECK(s.means[p] <= s.ci_high[p] + 1e-12);
  }
  CHECK(std::abs(s.mean_transition.p11 + s.mean_transition.p12 - 1.0) < 1e-10);
  CHECK(std::abs(s.mean_transition.p21 + s.mean_transition.p22 - 1.0) < 1e-10);
  CHECK(s.names[1] == "a1_12");
}

TEST_CASE("mc_study is bit-reproducible under a fixed master seed") {
  MsVarModel gen;
  gen.regime1 = RegimeCoefficients::full(0.2, -0.8, 0.8, 0.2);
  gen.regime2 = RegimeCoefficients::diagonal(0.9, 0.9);
  gen.sigma1 = {0.04, 0.0, 0.04};
  gen.sigma2 = {1.0, 0.0, 1.0};
  gen.trans = {0.95, 0.05, 0.05, 0.95};
  gen.init_dist = ergodic_distribution(gen.trans);

  EstimateConfig est;
  est.restarts = 2;
  est.max_iter = 300;
  const McSummary a = mc_study(gen, 4, 100, 99, est);
  const McSummary b = mc_study(gen, 4, 100, 99, est);
  CHECK(a.means == b.means);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
  CHECK(a.n_success == b.n_success);
}

TEST_CASE("mc_study rejects tiny replication counts") {
  CHECK_THROWS_AS(mc_study(oracles::usa_nfcd_model(), 1, 100, 1, {}), validation_error);
}

TEST_CASE("well-separated generator: the interaction coefficient interval "
          "excludes zero in most meta-trials") {
  // regime moduli 0.825 vs 0.5, persistent chain
  MsVarModel gen;
  gen.regime1 = RegimeCoefficients::full(0.3, -0.7, 0.9, 0.3);
  gen.regime2 = RegimeCoefficients::diagonal(0.5, 0.5);
  gen.sigma1 = {1.0, 0.0, 1.0};
  gen.sigma2 = {1.0, 0.0, 1.0};
  gen.trans = {0.9, 0.1, 0.1, 0.9};
  gen.init_dist = ergodic_distribution(gen.trans);
  REQUIRE(std::abs(diagnose(gen.regime1).modulus - diagnose(gen.regime2).modulus) > 0.3);

  EstimateConfig est;
  est.restarts = 2;
  est.max_iter = 300;
  int excludes_zero = 0;
  for (int meta = 0; meta < 10; ++meta) {
    const McSummary s = mc_study(gen, 100, 200, 5000 + meta, est);
    if (s.ci_high[1] < 0.0 || s.ci_low[1] > 0.0) ++excludes_zero;
  }
  CHECK(excludes_zero >= 8);
}
