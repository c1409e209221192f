#include "mscycles/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mscycles {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

bool finite(double x) { return std::isfinite(x); }

void check_finite(std::vector<std::string>& out, const char* name, double x) {
  if (!finite(x)) out.push_back(std::string(name) + " is not finite");
}

}  // namespace

std::vector<std::string> SeriesPair::violations() const {
  std::vector<std::string> out;
  if (y.size() != years.size() || f.size() != years.size()) {
    out.push_back("years/y/f lengths differ (" + std::to_string(years.size()) +
                  "/" + std::to_string(y.size()) + "/" + std::to_string(f.size()) + ")");
    return out;  // length mismatch makes the remaining checks ill-posed
  }
  if (years.size() < 10)
    out.push_back("series too short: T = " + std::to_string(years.size()) + " < 10");
  for (std::size_t i = 1; i < years.size(); ++i) {
    if (years[i] != years[i - 1] + 1) {
      out.push_back("years not contiguous at " + std::to_string(years[i - 1]) +
                    " -> " + std::to_string(years[i]));
      break;
    }
  }
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (!finite(y[i]) || !finite(f[i])) {
      out.push_back("non-finite value at year " + std::to_string(years[i]));
      break;
    }
  }
  return out;
}

void SeriesPair::validate() const {
  auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid series:";
  for (const auto& m : v) os << " " << m << ";";
  throw validation_error(os.str());
}

RegimeCoefficients RegimeCoefficients::from_entries(double a11, double a12,
                                                    double a21, double a22,
                                                    Restriction r) {
  if (r == Restriction::Diagonal && (a12 != 0.0 || a21 != 0.0))
    throw validation_error("diagonal restriction with nonzero off-diagonal entries (" +
                           fmt(a12) + ", " + fmt(a21) + ")");
  return {a11, a12, a21, a22, r};
}

std::array<double, 2> ergodic_distribution(const TransitionMatrix& trans) {
  const double denom = trans.p12 + trans.p21;
  if (denom <= 0.0) return {0.5, 0.5};
  return {trans.p21 / denom, trans.p12 / denom};
}

MsVarModel MsVarModel::with_ergodic_init(RegimeCoefficients regime1,
                                         RegimeCoefficients regime2,
                                         Covariance2 sigma1, Covariance2 sigma2,
                                         TransitionMatrix trans) {
  MsVarModel m{regime1, regime2, sigma1, sigma2, trans, {0.5, 0.5}};
  m.init_dist = ergodic_distribution(trans);
  return m;
}

namespace {

void check_coeffs(std::vector<std::string>& out, const char* name,
                  const RegimeCoefficients& c) {
  for (double v : {c.a11, c.a12, c.a21, c.a22})
    if (!finite(v)) {
      out.push_back(std::string(name) + ": non-finite entry");
      break;
    }
  if (c.restriction == Restriction::Diagonal && (c.a12 != 0.0 || c.a21 != 0.0))
    out.push_back(std::string(name) + ": off-diagonal entries not zero under diagonal restriction");
}

void check_covariance(std::vector<std::string>& out, const char* name,
                      const Covariance2& s) {
  check_finite(out, name, s.v11);
  check_finite(out, name, s.v12);
  check_finite(out, name, s.v22);
  if (s.v11 <= 0.0 || s.v22 <= 0.0)
    out.push_back(std::string(name) + ": variance nonpositive (v11 = " + fmt(s.v11) +
                  ", v22 = " + fmt(s.v22) + ")");
  else if (s.v12 * s.v12 > s.v11 * s.v22)
    out.push_back(std::string(name) + ": not positive semi-definite (v12^2 > v11*v22)");
}

constexpr double kRowSumTol = 1e-12;

void check_rows(std::vector<std::string>& out, const TransitionMatrix& p) {
  const double rows[2][2] = {{p.p11, p.p12}, {p.p21, p.p22}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j)
      if (!finite(rows[i][j]) || rows[i][j] < 0.0 || rows[i][j] > 1.0) {
        out.push_back("trans: p" + std::to_string(i + 1) + std::to_string(j + 1) +
                      " = " + fmt(rows[i][j]) + " outside [0, 1]");
      }
    const double sum = rows[i][0] + rows[i][1];
    if (std::abs(sum - 1.0) > kRowSumTol)
      out.push_back("trans: row " + std::to_string(i + 1) + " sums to " + fmt(sum));
  }
}

}  // namespace

std::vector<std::string> validate_model(const MsVarModel& model) {
  std::vector<std::string> out;
  check_coeffs(out, "regime1", model.regime1);
  check_coeffs(out, "regime2", model.regime2);
  if (model.regime1.restriction != Restriction::Full)
    out.push_back("regime1: must be unrestricted (Full)");
  if (model.regime2.restriction != Restriction::Diagonal)
    out.push_back("regime2: must carry the Diagonal restriction");
  check_covariance(out, "sigma1", model.sigma1);
  check_covariance(out, "sigma2", model.sigma2);
  check_rows(out, model.trans);
  for (double q : model.init_dist)
    if (!finite(q) || q < 0.0 || q > 1.0)
      out.push_back("init: entry " + fmt(q) + " outside [0, 1]");
  const double s = model.init_dist[0] + model.init_dist[1];
  if (std::abs(s - 1.0) > kRowSumTol)
    out.push_back("init: sums to " + fmt(s));
  return out;
}

}  // namespace mscycles
