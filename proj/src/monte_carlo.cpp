#include "mscycles/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mscycles/rng.hpp"

namespace mscycles {

namespace {

struct Chol2 {
  double l11, l21, l22;
};

Chol2 cholesky(const Covariance2& s) {
  if (!(s.v11 > 0.0))
    throw estimation_error("simulate: covariance not positive definite");
  const double l11 = std::sqrt(s.v11);
  const double l21 = s.v12 / l11;
  const double rest = s.v22 - l21 * l21;
  if (!(rest > 0.0))
    throw estimation_error("simulate: covariance not positive definite");
  return {l11, l21, std::sqrt(rest)};
}

double percentile(std::vector<double> sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SimulatedSeries simulate(const MsVarModel& model, int T, std::uint64_t seed,
                         const SimOptions& options) {
  {
    auto v = validate_model(model);
    if (!v.empty()) throw validation_error("simulate: invalid model: " + v.front());
  }
  if (T < 10) throw validation_error("simulate: T must be >= 10");
  if (options.burn_in < 0) throw validation_error("simulate: negative burn-in");

  const Chol2 chol1 = options.unit_noise ? Chol2{1.0, 0.0, 1.0} : cholesky(model.sigma1);
  const Chol2 chol2 = options.unit_noise ? Chol2{1.0, 0.0, 1.0} : cholesky(model.sigma2);

  Rng rng(seed);
  const int total = options.burn_in + T;
  SimulatedSeries out;
  out.series.years.reserve(T);
  out.series.y.reserve(T);
  out.series.f.reserve(T);
  out.regimes.reserve(T);
  out.series.labels = {"sim_real", "sim_financial"};

  int state = rng.uniform() < model.init_dist[0] ? 0 : 1;
  std::array<double, 2> y = options.start;
  for (int i = 0; i < total; ++i) {
    if (i > 0) {
      const double stay0 = model.trans(state, 0);
      state = rng.uniform() < stay0 ? 0 : 1;
      const auto& coeffs = state == 0 ? model.regime1 : model.regime2;
      const Chol2& chol = state == 0 ? chol1 : chol2;
      const double e0 = rng.normal();
      const double e1 = rng.normal();
      const auto mean = coeffs.apply(y[0], y[1]);
      y = {mean[0] + chol.l11 * e0, mean[1] + chol.l21 * e0 + chol.l22 * e1};
    }
    if (i >= options.burn_in) {
      out.series.years.push_back(i - options.burn_in + 1);
      out.series.y.push_back(y[0]);
      out.series.f.push_back(y[1]);
      out.regimes.push_back(state + 1);
    }
  }
  return out;
}

McSummary mc_study(const MsVarModel& model, int reps, int T,
                   std::uint64_t master_seed, const EstimateConfig& est_config,
                   bool unit_noise) {
  if (reps < 2) throw validation_error("mc_study: reps must be >= 2");

  McSummary summary;
  summary.n_total = reps;
  summary.names.assign(kParameterNames.begin(), kParameterNames.end());

  SimOptions sim_options;
  sim_options.unit_noise = unit_noise;

  std::vector<std::array<double, kNumFreeParams>> draws;
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t sim_seed = Rng::substream(master_seed, 2 * r);
    const std::uint64_t est_seed = Rng::substream(master_seed, 2 * r + 1);
    try {
      const SimulatedSeries sim = simulate(model, T, sim_seed, sim_options);
      EstimateConfig cfg = est_config;
      cfg.seed = est_seed;
      const EstimationResult fit = estimate(sim.series, cfg);
      if (!fit.converged)
        throw estimation_error("did not converge in " +
                               std::to_string(fit.iterations) + " iterations");
      draws.push_back(pack_parameters(fit.model));
    } catch (const std::exception& e) {
      summary.failures.push_back("rep " + std::to_string(r) + ": " + e.what());
    }
  }

  summary.n_success = static_cast<int>(draws.size());
  if (summary.n_success < (reps + 1) / 2) {
    std::string msg = "Monte Carlo unstable: " + std::to_string(summary.n_success) +
                      "/" + std::to_string(reps) + " replications converged";
    for (const auto& fail : summary.failures) msg += "; " + fail;
    throw estimation_error(msg);
  }

  summary.means.resize(kNumFreeParams);
  summary.ci_low.resize(kNumFreeParams);
  summary.ci_high.resize(kNumFreeParams);
  for (int p = 0; p < kNumFreeParams; ++p) {
    std::vector<double> values(draws.size());
    for (std::size_t r = 0; r < draws.size(); ++r) values[r] = draws[r][p];
    summary.means[p] =
        std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    std::sort(values.begin(), values.end());
    summary.ci_low[p] = percentile(values, 0.025);
    summary.ci_high[p] = percentile(std::move(values), 0.975);
  }

  const double p11 = summary.means[12], p22 = summary.means[13];
  summary.mean_transition = {p11, 1.0 - p11, 1.0 - p22, p22};
  return summary;
}

}  // namespace mscycles
