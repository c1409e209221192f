#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mscycles/model.hpp"

namespace mscycles {

/// Regime probabilities from the forward (Hamilton) filter and backward
/// (Kim) smoother, plus the sample log-likelihood. One row per observation;
/// the recursion conditions on the first observation, so row 0 carries the
/// model's initial distribution as a convention and rows 1..T-1 carry the
/// filter output proper.
struct FilterOutput {
  std::vector<std::array<double, 2>> filtered;
  std::vector<std::array<double, 2>> predicted;
  std::vector<std::array<double, 2>> smoothed;  // empty until kim_smoother runs
  double loglik = 0.0;
};

/// Standard errors for the free parameters, mirroring MsVarModel's layout.
/// Entries are NaN where the observed information is not positive.
struct StdErrors {
  std::array<double, 4> a1{};
  std::array<double, 2> a2{};
  std::array<double, 3> sigma1{};
  std::array<double, 3> sigma2{};
  std::array<double, 2> trans{};  // p11, p22; the off-diagonals are implied
  bool hessian_warning = false;
};

struct EstimateConfig {
  int max_iter = 1000;
  double tol = 1e-8;  // absolute log-likelihood change
  int restarts = 10;
  std::uint64_t seed = 0;
};

struct EstimationResult {
  MsVarModel model;
  StdErrors std_errors;
  FilterOutput filter;  // smoothed probabilities filled
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik_path;  // loglik of each successive EM iterate
  int best_restart = 0;
};

// Bivariate normal density of obs around coeffs * lag with covariance sigma.
// Throws estimation_error on a covariance that is not strictly positive
// definite ("degenerate covariance").
double conditional_density(const std::array<double, 2>& obs,
                           const std::array<double, 2>& lag,
                           const RegimeCoefficients& coeffs,
                           const Covariance2& sigma);

// Forward recursion over t = 2..T conditioning on the first observation;
// model.init_dist serves as the predicted distribution at t = 2. Fills
// filtered and predicted and the log-likelihood; smoothed stays empty.
FilterOutput hamilton_filter(const MsVarModel& model, const SeriesPair& data);

// Backward recursion filling smoothed; the last row equals the filtered row.
FilterOutput kim_smoother(const FilterOutput& filter, const TransitionMatrix& trans);

// One EM iteration: smoothed probabilities from the current model, then
// weighted regressions for both regimes (the diagonal restriction is imposed,
// not tested), weighted residual covariances, transition re-estimation, and
// the initial distribution reset to the first usable smoothed row.
MsVarModel em_step(const MsVarModel& model, const SeriesPair& data);

// Full estimation: OLS-anchored initialization, `restarts` independently
// perturbed EM runs, highest final log-likelihood wins (ties go to the
// lowest restart index). Deterministic for a fixed seed.
EstimationResult estimate(const SeriesPair& data, const EstimateConfig& config = {});

// Standard errors at a local optimum from the inverse negative numerical
// Hessian of the log-likelihood in the free parameters.
StdErrors std_errors(const MsVarModel& model, const SeriesPair& data);

// Free-parameter vector layout shared by std_errors and the Monte Carlo
// summaries: a1 row-major, a2 diagonal, sigma1 (v11, v12, v22), sigma2,
// then p11 and p22.
inline constexpr int kNumFreeParams = 14;
std::array<double, kNumFreeParams> pack_parameters(const MsVarModel& model);
MsVarModel unpack_parameters(const std::array<double, kNumFreeParams>& theta,
                             const std::array<double, 2>& init_dist);
extern const std::array<const char*, kNumFreeParams> kParameterNames;

// Weighted least squares of obs_t on obs_{t-1} with one weight per period
// (weights[0] is unused); the Diagonal restriction runs two scalar
// regressions instead of the joint system. Building block of the M-step,
// and of the OLS warm start when all weights are 1.
RegimeCoefficients weighted_var_ols(const SeriesPair& data,
                                    const std::vector<double>& weights,
                                    Restriction restriction);

}  // namespace mscycles
