#include "mscycles/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace mscycles {

CycleDiagnosis diagnose(const RegimeCoefficients& c) {
  CycleDiagnosis d;
  d.trace = c.a11 + c.a22;
  d.determinant = c.a11 * c.a22 - c.a12 * c.a21;
  d.discriminant = d.trace * d.trace - 4.0 * d.determinant;

  // Same discriminant through the cross-effect identity; both routes must
  // agree up to roundoff.
  const double diff = c.a11 - c.a22;
  const double alt = diff * diff + 4.0 * c.a12 * c.a21;
  const double scale = std::max({1.0, std::abs(d.discriminant), d.trace * d.trace,
                                 4.0 * std::abs(d.determinant)});
  if (std::abs(alt - d.discriminant) > 1e-12 * scale)
    throw std::logic_error("diagnose: discriminant identity violated");

  if (d.discriminant < 0.0) {
    const double re = d.trace / 2.0;
    const double im = std::sqrt(-d.discriminant) / 2.0;
    d.eigenvalues = {std::complex<double>(re, im), std::complex<double>(re, -im)};
    d.modulus = std::abs(d.eigenvalues[0]);
  } else {
    const double root = std::sqrt(d.discriminant);
    d.eigenvalues = {std::complex<double>((d.trace + root) / 2.0, 0.0),
                     std::complex<double>((d.trace - root) / 2.0, 0.0)};
    d.modulus = std::max(std::abs(d.eigenvalues[0]), std::abs(d.eigenvalues[1]));
  }

  d.oscillatory = d.discriminant < 0.0;
  d.necessary_condition = c.a12 * c.a21 < 0.0;
  d.minsky_signs = c.a21 > 0.0 && c.a12 < 0.0;
  d.stable = d.modulus < 1.0;
  return d;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::MinskyCycle: return "minsky";
    case Verdict::NonMinskyCycle: return "cycle-non-minsky";
    case Verdict::NoCycle: return "no-cycle";
    case Verdict::NotSignificant: return "not-significant";
  }
  throw std::logic_error("unknown verdict");
}

Verdict classify_minsky(const CycleDiagnosis& diag, bool a12_significant,
                        bool a21_significant) {
  if (!diag.oscillatory) return Verdict::NoCycle;
  if (!diag.minsky_signs) return Verdict::NonMinskyCycle;
  if (a12_significant && a21_significant) return Verdict::MinskyCycle;
  return Verdict::NotSignificant;
}

double significance_threshold(double level) {
  if (level == 0.01) return 2.576;
  if (level == 0.05) return 1.960;
  if (level == 0.10) return 1.645;
  throw validation_error("significance level must be 0.01, 0.05 or 0.10");
}

}  // namespace mscycles
