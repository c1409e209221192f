#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mscycles/estimation.hpp"
#include "mscycles/model.hpp"

namespace mscycles {

struct SimulatedSeries {
  SeriesPair series;
  std::vector<int> regimes;  // 1 or 2, aligned with series
};

struct SimOptions {
  int burn_in = 50;          // transient observations discarded up front
  bool unit_noise = false;   // identity shocks instead of Cholesky-scaled ones
  std::array<double, 2> start{0.0, 0.0};
};

// Draws a regime path from the chain and iterates y_t = A(s_t) y_{t-1} + L eps_t
// with standard-normal eps and L the lower Cholesky factor of the active
// regime's covariance (or the identity under unit_noise). Deterministic in
// the seed.
SimulatedSeries simulate(const MsVarModel& model, int T, std::uint64_t seed,
                         const SimOptions& options = {});

/// Per-parameter means and 95% percentile intervals over re-estimated
/// replications, in pack_parameters order.
struct McSummary {
  std::vector<std::string> names;
  std::vector<double> means;
  std::vector<double> ci_low;   // 2.5th percentile
  std::vector<double> ci_high;  // 97.5th percentile
  TransitionMatrix mean_transition;
  int n_success = 0;
  int n_total = 0;
  std::vector<std::string> failures;  // one entry per failed replication
};

// Simulates `reps` sample paths of length T from the model, re-estimates each,
// and summarizes the converged parameter vectors. Replication r draws its
// simulation and estimation seeds from substreams of master_seed, so results
// are independent of execution order. Fails ("Monte Carlo unstable") when
// fewer than half the replications converge.
McSummary mc_study(const MsVarModel& model, int reps, int T,
                   std::uint64_t master_seed, const EstimateConfig& est_config,
                   bool unit_noise = false);

}  // namespace mscycles
