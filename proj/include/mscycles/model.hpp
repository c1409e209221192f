#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace mscycles {

// Thrown when input data or a model fails its invariants.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical procedure (filtering, EM, Monte Carlo) breaks down.
struct estimation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on file-system failures in the pipeline.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Aligned yearly observations of one real and one financial variable.
struct SeriesPair {
  std::vector<int> years;
  std::vector<double> y;  // real variable
  std::vector<double> f;  // financial variable
  std::array<std::string, 2> labels{"real", "financial"};

  std::size_t size() const { return years.size(); }

  // All invariant violations: equal lengths, T >= 10, contiguous years,
  // finite values. Empty result means the pair is usable.
  std::vector<std::string> violations() const;
  void validate() const;  // throws validation_error with every violation
};

enum class Restriction { Full, Diagonal };

/// A 2x2 lag-coefficient matrix. Diagonal restriction pins both
/// off-diagonal entries to exactly zero.
struct RegimeCoefficients {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  Restriction restriction = Restriction::Full;

  static RegimeCoefficients full(double a11, double a12, double a21, double a22) {
    return {a11, a12, a21, a22, Restriction::Full};
  }
  static RegimeCoefficients diagonal(double d1, double d2) {
    return {d1, 0.0, 0.0, d2, Restriction::Diagonal};
  }
  // Checked constructor: rejects (never zeroes) off-diagonal input under
  // the Diagonal restriction.
  static RegimeCoefficients from_entries(double a11, double a12, double a21,
                                         double a22, Restriction r);

  // Matrix-vector product A * (x, z).
  std::array<double, 2> apply(double x, double z) const {
    return {a11 * x + a12 * z, a21 * x + a22 * z};
  }
};

/// Symmetric 2x2 covariance, stored as (v11, v12, v22).
struct Covariance2 {
  double v11 = 1.0;
  double v12 = 0.0;
  double v22 = 1.0;

  double det() const { return v11 * v22 - v12 * v12; }
  bool positive_definite() const { return v11 > 0.0 && det() > 0.0; }
};

/// Row-stochastic 2x2 transition matrix of the latent chain.
struct TransitionMatrix {
  double p11 = 0.9;
  double p12 = 0.1;
  double p21 = 0.1;
  double p22 = 0.9;

  double operator()(int from, int to) const {
    return from == 0 ? (to == 0 ? p11 : p12) : (to == 0 ? p21 : p22);
  }
};

// Stationary distribution (p21, p12) / (p12 + p21); falls back to (0.5, 0.5)
// when both off-diagonal probabilities are zero.
std::array<double, 2> ergodic_distribution(const TransitionMatrix& trans);

/// Two-regime switching VAR(1): an unrestricted interaction regime and a
/// diagonal no-interaction regime, with regime-specific error covariances.
struct MsVarModel {
  RegimeCoefficients regime1;  // Full
  RegimeCoefficients regime2;  // Diagonal
  Covariance2 sigma1;
  Covariance2 sigma2;
  TransitionMatrix trans;
  std::array<double, 2> init_dist{0.5, 0.5};

  const RegimeCoefficients& coeffs(int regime) const {
    return regime == 0 ? regime1 : regime2;
  }
  const Covariance2& sigma(int regime) const {
    return regime == 0 ? sigma1 : sigma2;
  }

  // Convenience constructor with init_dist set to the ergodic distribution.
  static MsVarModel with_ergodic_init(RegimeCoefficients regime1,
                                      RegimeCoefficients regime2,
                                      Covariance2 sigma1, Covariance2 sigma2,
                                      TransitionMatrix trans);
};

// Every violated invariant as a human-readable message; empty means ok.
// Violations are data, not failures: the model stays inspectable.
std::vector<std::string> validate_model(const MsVarModel& model);

}  // namespace mscycles
