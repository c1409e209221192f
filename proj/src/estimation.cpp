#include "mscycles/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mscycles/numdiff.hpp"
#include "mscycles/rng.hpp"

namespace mscycles {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
constexpr double kVarianceFloor = 1e-8;
constexpr double kStarvationFloor = 1e-6;
constexpr double kMaxAbsCorrelation = 0.999999;  // keeps Sigma invertible

double quad_form(const Covariance2& s, double r0, double r1, double det) {
  return (s.v22 * r0 * r0 - 2.0 * s.v12 * r0 * r1 + s.v11 * r1 * r1) / det;
}

double log_density(const std::array<double, 2>& obs, const std::array<double, 2>& lag,
                   const RegimeCoefficients& coeffs, const Covariance2& sigma) {
  const double det = sigma.det();
  if (!(det > 0.0) || !(sigma.v11 > 0.0))
    throw estimation_error("degenerate covariance (det = " + std::to_string(det) + ")");
  const auto mean = coeffs.apply(lag[0], lag[1]);
  const double r0 = obs[0] - mean[0];
  const double r1 = obs[1] - mean[1];
  return -kLog2Pi - 0.5 * std::log(det) - 0.5 * quad_form(sigma, r0, r1, det);
}

void require_valid(const MsVarModel& model) {
  auto v = validate_model(model);
  if (!v.empty()) {
    std::string msg = "invalid model:";
    for (const auto& m : v) msg += " " + m + ";";
    throw validation_error(msg);
  }
}

}  // namespace

double conditional_density(const std::array<double, 2>& obs,
                           const std::array<double, 2>& lag,
                           const RegimeCoefficients& coeffs,
                           const Covariance2& sigma) {
  return std::exp(log_density(obs, lag, coeffs, sigma));
}

FilterOutput hamilton_filter(const MsVarModel& model, const SeriesPair& data) {
  require_valid(model);
  const std::size_t T = data.size();
  if (T < 2 || data.y.size() != T || data.f.size() != T)
    throw validation_error("hamilton_filter: need at least 2 aligned observations");

  FilterOutput out;
  out.filtered.resize(T);
  out.predicted.resize(T);
  out.filtered[0] = out.predicted[0] = model.init_dist;
  out.loglik = 0.0;

  const TransitionMatrix& P = model.trans;
  for (std::size_t t = 1; t < T; ++t) {
    std::array<double, 2> pred;
    if (t == 1) {
      pred = model.init_dist;
    } else {
      const auto& prev = out.filtered[t - 1];
      pred = {P.p11 * prev[0] + P.p21 * prev[1], P.p12 * prev[0] + P.p22 * prev[1]};
    }
    out.predicted[t] = pred;

    const std::array<double, 2> obs{data.y[t], data.f[t]};
    const std::array<double, 2> lag{data.y[t - 1], data.f[t - 1]};
    const double ld0 = log_density(obs, lag, model.regime1, model.sigma1);
    const double ld1 = log_density(obs, lag, model.regime2, model.sigma2);

    // Work relative to the larger exponent so extreme densities cancel
    // instead of underflowing.
    const double shift = std::max(ld0, ld1);
    const double w0 = pred[0] * std::exp(ld0 - shift);
    const double w1 = pred[1] * std::exp(ld1 - shift);
    const double total = w0 + w1;
    if (!(total > 0.0) || !std::isfinite(shift))
      throw estimation_error("numerical underflow at t=" + std::to_string(t + 1));
    out.filtered[t] = {w0 / total, w1 / total};
    out.loglik += shift + std::log(total);
  }
  return out;
}

FilterOutput kim_smoother(const FilterOutput& filter, const TransitionMatrix& trans) {
  const std::size_t T = filter.filtered.size();
  if (T < 1 || filter.predicted.size() != T)
    throw validation_error("kim_smoother: filter output incomplete");

  FilterOutput out = filter;
  out.smoothed = filter.filtered;
  for (std::size_t t = T - 1; t-- > 1;) {
    std::array<double, 2> ratio;
    for (int j = 0; j < 2; ++j) {
      const double pred = filter.predicted[t + 1][j];
      const double smo = out.smoothed[t + 1][j];
      if (pred == 0.0) {
        if (smo != 0.0) throw estimation_error("smoother division by zero at t=" +
                                               std::to_string(t + 2));
        ratio[j] = 0.0;  // regime unreachable and carries no mass
      } else {
        ratio[j] = smo / pred;
      }
    }
    for (int i = 0; i < 2; ++i)
      out.smoothed[t][i] = filter.filtered[t][i] *
                           (trans(i, 0) * ratio[0] + trans(i, 1) * ratio[1]);
  }
  return out;
}

RegimeCoefficients weighted_var_ols(const SeriesPair& data,
                                    const std::vector<double>& weights,
                                    Restriction restriction) {
  const std::size_t T = data.size();
  if (weights.size() != T)
    throw validation_error("weighted_var_ols: one weight per observation required");

  if (restriction == Restriction::Diagonal) {
    double syy = 0.0, sy1 = 0.0, sff = 0.0, sf1 = 0.0;
    for (std::size_t t = 1; t < T; ++t) {
      const double w = weights[t];
      syy += w * data.y[t - 1] * data.y[t - 1];
      sy1 += w * data.y[t - 1] * data.y[t];
      sff += w * data.f[t - 1] * data.f[t - 1];
      sf1 += w * data.f[t - 1] * data.f[t];
    }
    if (syy == 0.0 || sff == 0.0)
      throw estimation_error("singular weighted regression (diagonal)");
    return RegimeCoefficients::diagonal(sy1 / syy, sf1 / sff);
  }

  // Joint system: both equations share the weighted Gram matrix of the lags.
  double m00 = 0.0, m01 = 0.0, m11 = 0.0;
  double by0 = 0.0, by1 = 0.0, bf0 = 0.0, bf1 = 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    const double w = weights[t];
    const double x0 = data.y[t - 1], x1 = data.f[t - 1];
    m00 += w * x0 * x0;
    m01 += w * x0 * x1;
    m11 += w * x1 * x1;
    by0 += w * x0 * data.y[t];
    by1 += w * x1 * data.y[t];
    bf0 += w * x0 * data.f[t];
    bf1 += w * x1 * data.f[t];
  }
  const double det = m00 * m11 - m01 * m01;
  const double scale = std::max(m00 * m11, m01 * m01);
  if (!(std::abs(det) > scale * 1e-14))
    throw estimation_error("singular weighted regression (collinear lags)");
  return RegimeCoefficients::full((m11 * by0 - m01 * by1) / det,
                                  (m00 * by1 - m01 * by0) / det,
                                  (m11 * bf0 - m01 * bf1) / det,
                                  (m00 * bf1 - m01 * bf0) / det);
}

namespace {

// Conditional maximizer of the expected log-likelihood for the diagonal
// regime given its error covariance: generalized least squares in (psi,
// omega). With a diagonal covariance this decouples into the two scalar
// regressions of y_t on y_{t-1} and f_t on f_{t-1}; with correlated errors
// the scalar regressions would occasionally lose EM monotonicity.
RegimeCoefficients diagonal_gls(const SeriesPair& data,
                                const std::vector<double>& weights,
                                const Covariance2& sigma) {
  const double det = sigma.det();
  const double s11 = sigma.v22 / det;
  const double s12 = -sigma.v12 / det;
  const double s22 = sigma.v11 / det;

  double mxx = 0.0, mxz = 0.0, mzz = 0.0;
  double bx = 0.0, bz = 0.0;
  const std::size_t T = data.size();
  for (std::size_t t = 1; t < T; ++t) {
    const double w = weights[t];
    const double x = data.y[t - 1], z = data.f[t - 1];
    mxx += w * x * x;
    mxz += w * x * z;
    mzz += w * z * z;
    bx += w * x * (s11 * data.y[t] + s12 * data.f[t]);
    bz += w * z * (s12 * data.y[t] + s22 * data.f[t]);
  }
  const double g11 = s11 * mxx, g12 = s12 * mxz, g22 = s22 * mzz;
  const double gdet = g11 * g22 - g12 * g12;
  const double scale = std::max(std::abs(g11 * g22), g12 * g12);
  if (!(std::abs(gdet) > scale * 1e-14))
    throw estimation_error("singular weighted regression (diagonal)");
  return RegimeCoefficients::diagonal((g22 * bx - g12 * bz) / gdet,
                                      (g11 * bz - g12 * bx) / gdet);
}

Covariance2 weighted_residual_covariance(const SeriesPair& data,
                                         const std::vector<double>& weights,
                                         const RegimeCoefficients& coeffs,
                                         double total_weight) {
  Covariance2 s{0.0, 0.0, 0.0};
  const std::size_t T = data.size();
  for (std::size_t t = 1; t < T; ++t) {
    const auto mean = coeffs.apply(data.y[t - 1], data.f[t - 1]);
    const double r0 = data.y[t] - mean[0];
    const double r1 = data.f[t] - mean[1];
    s.v11 += weights[t] * r0 * r0;
    s.v12 += weights[t] * r0 * r1;
    s.v22 += weights[t] * r1 * r1;
  }
  s.v11 = std::max(s.v11 / total_weight, kVarianceFloor);
  s.v22 = std::max(s.v22 / total_weight, kVarianceFloor);
  s.v12 /= total_weight;
  const double cap = kMaxAbsCorrelation * std::sqrt(s.v11 * s.v22);
  s.v12 = std::clamp(s.v12, -cap, cap);
  return s;
}

MsVarModel m_step(const MsVarModel& model, const SeriesPair& data,
                  const FilterOutput& fo) {
  const std::size_t T = data.size();
  std::vector<double> w1(T, 0.0), w2(T, 0.0);
  double total1 = 0.0, total2 = 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    w1[t] = fo.smoothed[t][0];
    w2[t] = fo.smoothed[t][1];
    total1 += w1[t];
    total2 += w2[t];
  }
  if (total1 < kStarvationFloor || total2 < kStarvationFloor)
    throw estimation_error("regime starvation: smoothed weights (" +
                           std::to_string(total1) + ", " + std::to_string(total2) + ")");

  MsVarModel next = model;
  next.regime1 = weighted_var_ols(data, w1, Restriction::Full);
  next.regime2 = diagonal_gls(data, w2, model.sigma2);
  next.sigma1 = weighted_residual_covariance(data, w1, next.regime1, total1);
  next.sigma2 = weighted_residual_covariance(data, w2, next.regime2, total2);

  // Transition re-estimation from pairwise smoothed probabilities
  // xi_t(i,j) = filtered_t(i) p_ij smoothed_{t+1}(j) / predicted_{t+1}(j).
  double num[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t t = 1; t + 1 < T; ++t) {
    std::array<double, 2> ratio;
    for (int j = 0; j < 2; ++j) {
      const double pred = fo.predicted[t + 1][j];
      ratio[j] = pred > 0.0 ? fo.smoothed[t + 1][j] / pred : 0.0;
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        num[i][j] += fo.filtered[t][i] * model.trans(i, j) * ratio[j];
  }
  // A regime with no interior mass contributes no transition information;
  // its row is left unchanged.
  next.trans = model.trans;
  if (num[0][0] + num[0][1] > 0.0) {
    next.trans.p11 = num[0][0] / (num[0][0] + num[0][1]);
    next.trans.p12 = num[0][1] / (num[0][0] + num[0][1]);
  }
  if (num[1][0] + num[1][1] > 0.0) {
    next.trans.p21 = num[1][0] / (num[1][0] + num[1][1]);
    next.trans.p22 = num[1][1] / (num[1][0] + num[1][1]);
  }

  next.init_dist = fo.smoothed[1];
  const double qsum = next.init_dist[0] + next.init_dist[1];
  next.init_dist = {next.init_dist[0] / qsum, next.init_dist[1] / qsum};
  return next;
}

}  // namespace

MsVarModel em_step(const MsVarModel& model, const SeriesPair& data) {
  const FilterOutput fo = kim_smoother(hamilton_filter(model, data), model.trans);
  return m_step(model, data, fo);
}

namespace {

MsVarModel ols_warm_start(const SeriesPair& data) {
  const std::size_t T = data.size();
  std::vector<double> ones(T, 1.0);
  const RegimeCoefficients a1 = weighted_var_ols(data, ones, Restriction::Full);
  const RegimeCoefficients a2 = weighted_var_ols(data, ones, Restriction::Diagonal);
  const Covariance2 sigma =
      weighted_residual_covariance(data, ones, a1, static_cast<double>(T - 1));
  const TransitionMatrix p0{0.8, 0.2, 0.2, 0.8};
  return MsVarModel::with_ergodic_init(a1, a2, sigma, sigma, p0);
}

struct EmRun {
  MsVarModel model;
  FilterOutput filter;  // forward pass only
  std::vector<double> loglik_path;
  int iterations = 0;
  bool converged = false;
};

EmRun run_em(MsVarModel model, const SeriesPair& data, int max_iter, double tol) {
  EmRun run;
  FilterOutput fo = hamilton_filter(model, data);
  run.loglik_path.push_back(fo.loglik);
  for (int k = 1; k <= max_iter; ++k) {
    model = m_step(model, data, kim_smoother(fo, model.trans));
    fo = hamilton_filter(model, data);
    run.loglik_path.push_back(fo.loglik);
    run.iterations = k;
    const auto n = run.loglik_path.size();
    if (std::abs(run.loglik_path[n - 1] - run.loglik_path[n - 2]) < tol) {
      run.converged = true;
      break;
    }
  }
  run.model = model;
  run.filter = std::move(fo);
  return run;
}

}  // namespace

EstimationResult estimate(const SeriesPair& data, const EstimateConfig& config) {
  data.validate();
  if (config.restarts < 1)
    throw validation_error("estimate: restarts must be >= 1");
  if (config.max_iter < 0 || !(config.tol > 0.0))
    throw validation_error("estimate: max_iter must be >= 0 and tol > 0");

  MsVarModel base;
  try {
    base = ols_warm_start(data);
  } catch (const std::exception& e) {
    throw estimation_error(std::string("estimation failed: initialization: ") +
                           e.what());
  }

  bool have_best = false;
  EmRun best;
  int best_restart = 0;
  std::string failures;
  for (int r = 0; r < config.restarts; ++r) {
    MsVarModel start = base;
    if (r > 0) {
      Rng rng(Rng::substream(config.seed, static_cast<std::uint64_t>(r)));
      start.regime1.a11 += 0.1 * rng.normal();
      start.regime1.a12 += 0.1 * rng.normal();
      start.regime1.a21 += 0.1 * rng.normal();
      start.regime1.a22 += 0.1 * rng.normal();
      start.regime2.a11 += 0.1 * rng.normal();
      start.regime2.a22 += 0.1 * rng.normal();
    }
    try {
      EmRun run = run_em(start, data, config.max_iter, config.tol);
      // Strictly-better wins; a tie within 1e-10 keeps the earlier restart.
      if (!have_best || run.loglik_path.back() > best.loglik_path.back() + 1e-10) {
        best = std::move(run);
        best_restart = r;
        have_best = true;
      }
    } catch (const std::exception& e) {
      failures += std::string(failures.empty() ? "" : "; ") + "restart " +
                  std::to_string(r) + ": " + e.what();
    }
  }
  if (!have_best)
    throw estimation_error("estimation failed: " + failures);

  EstimationResult result;
  result.model = best.model;
  result.filter = kim_smoother(best.filter, best.model.trans);
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.loglik_path = std::move(best.loglik_path);
  result.best_restart = best_restart;
  result.std_errors = std_errors(result.model, data);
  return result;
}

const std::array<const char*, kNumFreeParams> kParameterNames = {
    "a1_11", "a1_12", "a1_21", "a1_22", "a2_11", "a2_22",
    "sigma1_v11", "sigma1_v12", "sigma1_v22",
    "sigma2_v11", "sigma2_v12", "sigma2_v22", "p11", "p22"};

std::array<double, kNumFreeParams> pack_parameters(const MsVarModel& m) {
  return {m.regime1.a11, m.regime1.a12, m.regime1.a21, m.regime1.a22,
          m.regime2.a11, m.regime2.a22,
          m.sigma1.v11,  m.sigma1.v12,  m.sigma1.v22,
          m.sigma2.v11,  m.sigma2.v12,  m.sigma2.v22,
          m.trans.p11,   m.trans.p22};
}

MsVarModel unpack_parameters(const std::array<double, kNumFreeParams>& t,
                             const std::array<double, 2>& init_dist) {
  MsVarModel m;
  m.regime1 = RegimeCoefficients::full(t[0], t[1], t[2], t[3]);
  m.regime2 = RegimeCoefficients::diagonal(t[4], t[5]);
  m.sigma1 = {t[6], t[7], t[8]};
  m.sigma2 = {t[9], t[10], t[11]};
  m.trans = {t[12], 1.0 - t[12], 1.0 - t[13], t[13]};
  m.init_dist = init_dist;
  return m;
}

StdErrors std_errors(const MsVarModel& model, const SeriesPair& data) {
  const auto theta0 = pack_parameters(model);
  const std::array<double, 2> init = model.init_dist;
  const auto loglik = [&](const std::vector<double>& th) -> double {
    std::array<double, kNumFreeParams> packed;
    std::copy(th.begin(), th.end(), packed.begin());
    try {
      return hamilton_filter(unpack_parameters(packed, init), data).loglik;
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const HessianSe hs = hessian_std_errors(
      loglik, std::vector<double>(theta0.begin(), theta0.end()));

  StdErrors out;
  auto it = hs.se.begin();
  for (auto& v : out.a1) v = *it++;
  for (auto& v : out.a2) v = *it++;
  for (auto& v : out.sigma1) v = *it++;
  for (auto& v : out.sigma2) v = *it++;
  for (auto& v : out.trans) v = *it++;
  out.hessian_warning = hs.warning;
  return out;
}

}  // namespace mscycles
