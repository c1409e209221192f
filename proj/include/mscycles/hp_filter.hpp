#pragma once

#include <vector>

namespace mscycles {

struct HpConfig {
  double lambda = 100.0;  // yearly-frequency default
};

struct HpResult {
  std::vector<double> trend;
  std::vector<double> cycle;  // series - trend, elementwise
};

// Penalized least-squares trend extraction: minimizes
//   sum (y_t - tau_t)^2 + lambda * sum ((tau_{t+1} - tau_t) - (tau_t - tau_{t-1}))^2
// by solving the pentadiagonal normal equations (I + lambda D'D) tau = y with
// a direct banded Cholesky factorization. Requires T >= 4 and finite input.
HpResult hp_decompose(const std::vector<double>& series, const HpConfig& config);

}  // namespace mscycles
