#pragma once

#include <array>
#include <complex>
#include <string>

#include "mscycles/model.hpp"

namespace mscycles {

/// Eigenvalue analysis of a 2x2 lag matrix: oscillation requires complex
/// roots (negative discriminant), which in turn requires opposite-signed
/// cross effects a12 * a21 < 0.
struct CycleDiagnosis {
  double trace = 0.0;
  double determinant = 0.0;
  double discriminant = 0.0;  // trace^2 - 4 det
  std::array<std::complex<double>, 2> eigenvalues{};
  double modulus = 0.0;  // max |eigenvalue|
  bool oscillatory = false;          // discriminant < 0
  bool necessary_condition = false;  // a12 * a21 < 0
  bool minsky_signs = false;         // a21 > 0 and a12 < 0
  bool stable = false;               // modulus < 1
};

CycleDiagnosis diagnose(const RegimeCoefficients& coeffs);

enum class Verdict { MinskyCycle, NonMinskyCycle, NoCycle, NotSignificant };

std::string to_string(Verdict v);  // "minsky", "cycle-non-minsky", "no-cycle", "not-significant"

// MinskyCycle needs oscillation, the Minsky sign pattern, and both cyclical
// coefficients (a12 and a21) individually significant.
Verdict classify_minsky(const CycleDiagnosis& diag, bool a12_significant,
                        bool a21_significant);

// Two-sided normal critical value for level in {0.01, 0.05, 0.10}.
double significance_threshold(double level);

inline bool is_significant(double estimate, double std_error, double level) {
  return std::abs(estimate) > significance_threshold(level) * std_error;
}

}  // namespace mscycles
