#pragma once

#include <functional>
#include <vector>

namespace mscycles {

struct HessianSe {
  std::vector<double> se;  // NaN where the information matrix is not positive
  bool warning = false;    // set when any entry could not be computed
};

// Standard errors sqrt(diag(inv(-H))) where H is the central-difference
// Hessian of f (a log-likelihood) at theta, step max(1e-5, 1e-5 |theta_i|).
// f may return NaN for invalid points; affected parameters get NaN errors.
HessianSe hessian_std_errors(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& theta);

}  // namespace mscycles
