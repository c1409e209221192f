#include "mscycles/numdiff.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace mscycles {

HessianSe hessian_std_errors(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  HessianSe out;
  out.se.assign(n, nan);

  std::vector<double> step(n);
  for (int i = 0; i < n; ++i) step[i] = std::max(1e-5, 1e-5 * std::abs(theta[i]));

  auto eval = [&](std::vector<double> point) { return f(point); };
  const double f0 = eval(theta);
  if (!std::isfinite(f0)) {
    out.warning = true;
    return out;
  }

  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> p = theta;
    p[i] = theta[i] + step[i];
    const double fp = eval(p);
    p[i] = theta[i] - step[i];
    const double fm = eval(p);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
    for (int j = 0; j < i; ++j) {
      std::vector<double> q = theta;
      q[i] = theta[i] + step[i];
      q[j] = theta[j] + step[j];
      const double fpp = eval(q);
      q[j] = theta[j] - step[j];
      const double fpm = eval(q);
      q[i] = theta[i] - step[i];
      const double fmm = eval(q);
      q[j] = theta[j] + step[j];
      const double fmp = eval(q);
      hess(i, j) = hess(j, i) =
          (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
    }
  }

  if (!hess.allFinite()) {
    out.warning = true;
    return out;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(-hess);
  if (!lu.isInvertible()) {
    out.warning = true;
    return out;
  }
  const Eigen::MatrixXd cov = lu.inverse();
  for (int i = 0; i < n; ++i) {
    if (cov(i, i) > 0.0)
      out.se[i] = std::sqrt(cov(i, i));
    else
      out.warning = true;  // information matrix not positive in this direction
  }
  return out;
}

}  // namespace mscycles
