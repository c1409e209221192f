#include "mscycles/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include "mscycles/diagnostics.hpp"
#include "mscycles/hp_filter.hpp"
#include "mscycles/json_io.hpp"
#include "mscycles/monte_carlo.hpp"
#include "mscycles/stat_tests.hpp"

namespace fs = std::filesystem;

namespace mscycles {

namespace {

// Display precision for table-style artifacts.
std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Shortest round-trip representation for machine-readable artifacts.
std::string fmt_exact(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? ""
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& cell, const std::string& column, int row) {
  const char* begin = cell.c_str();
  char* parse_end = nullptr;
  const double value = std::strtod(begin, &parse_end);
  if (cell.empty() || parse_end != begin + cell.size())
    throw validation_error("non-numeric cell '" + cell + "' in column '" + column +
                           "' at row " + std::to_string(row));
  return value;
}

}  // namespace

SeriesPair ingest(const std::string& path, const std::string& year_column,
                  const std::string& real_column,
                  const std::string& financial_column, bool log_real) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open input file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw validation_error("empty input file '" + path + "'");
  const auto header = split_csv_line(line);
  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw validation_error("missing column '" + name + "' in '" + path + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t year_idx = column_index(year_column);
  const std::size_t real_idx = column_index(real_column);
  const std::size_t fin_idx = column_index(financial_column);

  SeriesPair data;
  data.labels = {real_column, financial_column};
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw validation_error("row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
    const double year_value = parse_number(fields[year_idx], year_column, row);
    const int year = static_cast<int>(year_value);
    if (static_cast<double>(year) != year_value)
      throw validation_error("non-integer year '" + fields[year_idx] + "' at row " +
                             std::to_string(row));
    double real_value = parse_number(fields[real_idx], real_column, row);
    const double fin_value = parse_number(fields[fin_idx], financial_column, row);
    if (!std::isfinite(real_value) || !std::isfinite(fin_value) ||
        !std::isfinite(year_value))
      throw validation_error("non-finite value at row " + std::to_string(row));
    if (log_real) {
      if (!(real_value > 0.0))
        throw validation_error("cannot take log of nonpositive value '" +
                               fields[real_idx] + "' at row " + std::to_string(row));
      real_value = std::log(real_value);
    }
    if (!data.years.empty()) {
      if (year == data.years.back())
        throw validation_error("duplicate year " + std::to_string(year) + " at row " +
                               std::to_string(row));
      if (year != data.years.back() + 1)
        throw validation_error("gap in years at row " + std::to_string(row) + " (" +
                               std::to_string(data.years.back()) + " -> " +
                               std::to_string(year) + ")");
    }
    data.years.push_back(year);
    data.y.push_back(real_value);
    data.f.push_back(fin_value);
  }
  data.validate();
  return data;
}

namespace {

template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  auto tag = [&](const char* what) {
    return std::string("[") + name + "] " + what;
  };
  try {
    return fn();
  } catch (const validation_error& e) {
    throw validation_error(tag(e.what()));
  } catch (const io_error& e) {
    throw io_error(tag(e.what()));
  } catch (const estimation_error& e) {
    throw estimation_error(tag(e.what()));
  } catch (const std::exception& e) {
    throw estimation_error(tag(e.what()));
  }
}

// Ljung-Box over a possibly short or degenerate residual set: the report is
// emitted either way, with a NaN statistic when the test cannot run.
TestReport guarded_ljung_box(const std::vector<double>& residuals, int lags,
                             double level, bool low_sample) {
  TestReport report;
  try {
    report = ljung_box(residuals, lags, level);
  } catch (const std::exception&) {
    report.statistic = std::numeric_limits<double>::quiet_NaN();
    report.critical_value = chi_square_critical_value(std::max(lags, 1), level);
    report.significance = level;
    report.reject_null = false;
    report.null_description = "no serial correlation (not computable)";
    report.low_sample_warning = true;
  }
  report.low_sample_warning = report.low_sample_warning || low_sample;
  return report;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const fs::path& dir) : dir_(dir) {}

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw io_error("cannot write '" + (dir_ / name).string() + "'");
    written_.push_back(dir_ / name);
    return out;
  }

  void finish(std::ofstream& out, const std::string& name) {
    out.flush();
    if (!out) throw io_error("failed writing '" + name + "'");
  }

  void remove_partial() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

struct PipelineOutputs {
  SeriesPair cycles;
  TestReport df_real, df_financial;
  EstimationResult fit;
  CycleDiagnosis diag1, diag2;
  Verdict verdict = Verdict::NoCycle;
  RegimeResiduals residuals;
  TestReport lb_eps, lb_phi, lb_delta, lb_rho;
  bool has_mc = false;
  McSummary mc;
};

void write_artifacts_impl(const PipelineConfig& config, const PipelineOutputs& out,
                          ArtifactWriter& writer) {
  {
    auto f = writer.open("estimates.json");
    f << estimation_to_json(out.fit) << "\n";
    writer.finish(f, "estimates.json");
  }
  {
    auto f = writer.open("estimates.csv");
    f << "block,parameter,estimate,std_error\n";
    const auto& m = out.fit.model;
    const auto& se = out.fit.std_errors;
    const char* r1[4] = {"a11", "a12", "a21", "a22"};
    const double v1[4] = {m.regime1.a11, m.regime1.a12, m.regime1.a21, m.regime1.a22};
    for (int i = 0; i < 4; ++i)
      f << "regime1," << r1[i] << ',' << fmt6(v1[i]) << ',' << fmt6(se.a1[i]) << '\n';
    f << "regime2,a11," << fmt6(m.regime2.a11) << ',' << fmt6(se.a2[0]) << '\n';
    f << "regime2,a22," << fmt6(m.regime2.a22) << ',' << fmt6(se.a2[1]) << '\n';
    const char* sv[3] = {"v11", "v12", "v22"};
    const double s1[3] = {m.sigma1.v11, m.sigma1.v12, m.sigma1.v22};
    const double s2[3] = {m.sigma2.v11, m.sigma2.v12, m.sigma2.v22};
    for (int i = 0; i < 3; ++i)
      f << "sigma1," << sv[i] << ',' << fmt6(s1[i]) << ',' << fmt6(se.sigma1[i]) << '\n';
    for (int i = 0; i < 3; ++i)
      f << "sigma2," << sv[i] << ',' << fmt6(s2[i]) << ',' << fmt6(se.sigma2[i]) << '\n';
    f << "transition,p11," << fmt6(m.trans.p11) << ',' << fmt6(se.trans[0]) << '\n';
    f << "transition,p12," << fmt6(m.trans.p12) << ",\n";
    f << "transition,p21," << fmt6(m.trans.p21) << ",\n";
    f << "transition,p22," << fmt6(m.trans.p22) << ',' << fmt6(se.trans[1]) << '\n';
    f << "init,q1," << fmt6(m.init_dist[0]) << ",\n";
    f << "init,q2," << fmt6(m.init_dist[1]) << ",\n";
    writer.finish(f, "estimates.csv");
  }
  {
    auto f = writer.open("probabilities.csv");
    f << "year,filtered_regime1,filtered_regime2,smoothed_regime1,smoothed_regime2\n";
    const auto& filt = out.fit.filter;
    for (std::size_t t = 0; t < out.cycles.size(); ++t)
      f << out.cycles.years[t] << ',' << fmt_exact(filt.filtered[t][0]) << ','
        << fmt_exact(filt.filtered[t][1]) << ',' << fmt_exact(filt.smoothed[t][0])
        << ',' << fmt_exact(filt.smoothed[t][1]) << '\n';
    writer.finish(f, "probabilities.csv");
  }
  {
    auto f = writer.open("unit_root.csv");
    f << "series,lags,c_value,statistic,reject_unit_root\n";
    f << out.cycles.labels[0] << ',' << config.df_lags << ','
      << fmt6(out.df_real.critical_value) << ',' << fmt6(out.df_real.statistic) << ','
      << fmt_bool(out.df_real.reject_null) << '\n';
    f << out.cycles.labels[1] << ',' << config.df_lags << ','
      << fmt6(out.df_financial.critical_value) << ','
      << fmt6(out.df_financial.statistic) << ','
      << fmt_bool(out.df_financial.reject_null) << '\n';
    writer.finish(f, "unit_root.csv");
  }
  {
    auto f = writer.open("ljung_box.csv");
    f << "residual,regime,n_obs,lags,c_value,statistic,reject_no_autocorrelation,"
         "low_sample_warning\n";
    auto row = [&](const char* name, int regime, std::size_t n, const TestReport& r) {
      f << name << ',' << regime << ',' << n << ',' << config.lb_lags << ','
        << fmt6(r.critical_value) << ',' << fmt6(r.statistic) << ','
        << fmt_bool(r.reject_null) << ',' << fmt_bool(r.low_sample_warning) << '\n';
    };
    row("epsilon", 1, out.residuals.eps.size(), out.lb_eps);
    row("phi", 1, out.residuals.phi.size(), out.lb_phi);
    row("delta", 2, out.residuals.delta.size(), out.lb_delta);
    row("rho", 2, out.residuals.rho.size(), out.lb_rho);
    writer.finish(f, "ljung_box.csv");
  }
  if (out.has_mc) {
    auto f = writer.open("monte_carlo.csv");
    f << "block,parameter,mean,ci_low,ci_high\n";
    const char* blocks[kNumFreeParams] = {
        "regime1", "regime1", "regime1", "regime1", "regime2", "regime2",
        "sigma1",  "sigma1",  "sigma1",  "sigma2",  "sigma2",  "sigma2",
        "transition", "transition"};
    for (int p = 0; p < kNumFreeParams; ++p)
      f << blocks[p] << ',' << out.mc.names[p] << ',' << fmt6(out.mc.means[p]) << ','
        << fmt6(out.mc.ci_low[p]) << ',' << fmt6(out.mc.ci_high[p]) << '\n';
    f << "meta,n_success," << out.mc.n_success << ",,\n";
    f << "meta,n_total," << out.mc.n_total << ",,\n";
    writer.finish(f, "monte_carlo.csv");
  }
  {
    auto f = writer.open("verdict.txt");
    f << to_string(out.verdict) << '\n';
    f << "discriminant: " << fmt6(out.diag1.discriminant) << '\n';
    const auto& ev = out.diag1.eigenvalues;
    auto fmt_complex = [](const std::complex<double>& z) {
      std::string s = fmt6(z.real());
      s += z.imag() < 0 ? "-" : "+";
      s += fmt6(std::abs(z.imag()));
      s += "i";
      return s;
    };
    f << "eigenvalues: " << fmt_complex(ev[0]) << ' ' << fmt_complex(ev[1]) << '\n';
    f << "modulus: " << fmt6(out.diag1.modulus) << '\n';
    f << "regime2: " << to_string(out.diag2.oscillatory
                                      ? Verdict::NonMinskyCycle
                                      : Verdict::NoCycle)
      << '\n';
    writer.finish(f, "verdict.txt");
  }
}

void write_artifacts(const PipelineConfig& config, const PipelineOutputs& out) {
  {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + config.output_dir + "'");
  }
  ArtifactWriter writer{fs::path(config.output_dir)};
  try {
    write_artifacts_impl(config, out, writer);
  } catch (...) {
    writer.remove_partial();
    throw;
  }
}

void run_pipeline_impl(const PipelineConfig& config) {
  stage("config", [&] {
    if (!(config.lambda >= 0.0))
      throw validation_error("lambda must be >= 0");
    if (config.mc.enabled && config.mc.reps < 2)
      throw validation_error("mc reps must be >= 2 when enabled");
    significance_threshold(config.significance_level);  // rejects other levels
  });

  const SeriesPair data = stage("ingest", [&] {
    return ingest(config.input_path, config.year_column, config.real_column,
                  config.financial_column, config.log_real);
  });

  PipelineOutputs out;
  stage("hp-filter", [&] {
    const HpConfig hp{config.lambda};
    const HpResult real = hp_decompose(data.y, hp);
    const HpResult fin = hp_decompose(data.f, hp);
    out.cycles.years = data.years;
    out.cycles.labels = data.labels;
    out.cycles.y = real.cycle;
    out.cycles.f = fin.cycle;
  });

  stage("unit-root", [&] {
    out.df_real = df_test(out.cycles.y, config.df_lags);
    out.df_financial = df_test(out.cycles.f, config.df_lags);
  });

  stage("estimate", [&] { out.fit = estimate(out.cycles, config.est); });

  stage("diagnostics", [&] {
    out.diag1 = diagnose(out.fit.model.regime1);
    out.diag2 = diagnose(out.fit.model.regime2);
    const bool sig_a12 = is_significant(out.fit.model.regime1.a12,
                                        out.fit.std_errors.a1[1],
                                        config.significance_level);
    const bool sig_a21 = is_significant(out.fit.model.regime1.a21,
                                        out.fit.std_errors.a1[2],
                                        config.significance_level);
    out.verdict = classify_minsky(out.diag1, sig_a12, sig_a21);
  });

  stage("residual-tests", [&] {
    out.residuals = regime_residuals(out.fit, out.cycles);
    const bool low1 = out.residuals.regime1_low_sample;
    const bool low2 = out.residuals.regime2_low_sample;
    out.lb_eps = guarded_ljung_box(out.residuals.eps, config.lb_lags, 0.01, low1);
    out.lb_phi = guarded_ljung_box(out.residuals.phi, config.lb_lags, 0.01, low1);
    out.lb_delta = guarded_ljung_box(out.residuals.delta, config.lb_lags, 0.01, low2);
    out.lb_rho = guarded_ljung_box(out.residuals.rho, config.lb_lags, 0.01, low2);
  });

  if (config.mc.enabled) {
    stage("monte-carlo", [&] {
      const int T = config.mc.T > 0 ? config.mc.T
                                    : static_cast<int>(out.cycles.size());
      out.mc = mc_study(out.fit.model, config.mc.reps, T, config.est.seed,
                        config.est, config.mc.unit_noise);
      out.has_mc = true;
    });
  }

  stage("write", [&] { write_artifacts(config, out); });
}

}  // namespace

int run_pipeline(const PipelineConfig& config, std::ostream& err) {
  try {
    run_pipeline_impl(config);
    return 0;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_pipeline(const PipelineConfig& config) {
  return run_pipeline(config, std::cerr);
}

}  // namespace mscycles
