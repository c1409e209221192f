#include "mscycles/hp_filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mscycles/model.hpp"

namespace mscycles {

// I + lambda D'D is symmetric positive definite with bandwidth 2, so a
// banded Cholesky factorization solves it exactly in O(T).
HpResult hp_decompose(const std::vector<double>& series, const HpConfig& config) {
  const std::size_t n = series.size();
  if (n < 4)
    throw validation_error("hp_decompose: series too short (T = " +
                           std::to_string(n) + " < 4)");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
    throw validation_error("hp_decompose: lambda must be finite and >= 0");
  for (double v : series)
    if (!std::isfinite(v)) throw validation_error("hp_decompose: non-finite input");

  const double lam = config.lambda;

  // Bands of I + lambda D'D (diag, first and second superdiagonal).
  std::vector<double> diag(n), off1(n - 1), off2(n - 2, lam);
  diag[0] = diag[n - 1] = 1.0 + lam;
  diag[1] = diag[n - 2] = 1.0 + 5.0 * lam;
  for (std::size_t i = 2; i + 2 < n; ++i) diag[i] = 1.0 + 6.0 * lam;
  off1[0] = off1[n - 2] = -2.0 * lam;
  for (std::size_t i = 1; i + 2 < n; ++i) off1[i] = -4.0 * lam;

  // Banded Cholesky A = L L' with L(i,i) = l0, L(i,i-1) = l1, L(i,i-2) = l2.
  std::vector<double> l0(n), l1(n, 0.0), l2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2) l2[i] = off2[i - 2] / l0[i - 2];
    if (i >= 1) l1[i] = (off1[i - 1] - (i >= 2 ? l1[i - 1] * l2[i] : 0.0)) / l0[i - 1];
    const double pivot = diag[i] - l1[i] * l1[i] - l2[i] * l2[i];
    if (!(pivot > 0.0))
      throw estimation_error("hp_decompose: factorization lost positive definiteness");
    l0[i] = std::sqrt(pivot);
  }

  HpResult out;
  out.trend.resize(n);
  // Forward substitution L z = y, then backward L' trend = z.
  std::vector<double>& z = out.trend;
  for (std::size_t i = 0; i < n; ++i) {
    double v = series[i];
    if (i >= 1) v -= l1[i] * z[i - 1];
    if (i >= 2) v -= l2[i] * z[i - 2];
    z[i] = v / l0[i];
  }
  for (std::size_t k = n; k-- > 0;) {
    double v = z[k];
    if (k + 1 < n) v -= l1[k + 1] * out.trend[k + 1];
    if (k + 2 < n) v -= l2[k + 2] * out.trend[k + 2];
    out.trend[k] = v / l0[k];
  }

  out.cycle.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.cycle[i] = series[i] - out.trend[i];
  return out;
}

}  // namespace mscycles
