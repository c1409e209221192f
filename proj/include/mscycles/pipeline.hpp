#pragma once

#include <iosfwd>
#include <string>

#include "mscycles/estimation.hpp"
#include "mscycles/model.hpp"

namespace mscycles {

struct PipelineConfig {
  std::string input_path;
  std::string year_column = "year";
  std::string real_column;
  std::string financial_column;
  bool log_real = false;       // natural log of the real column before filtering
  double lambda = 100.0;       // HP smoothing, yearly default
  EstimateConfig est;
  struct McConfig {
    bool enabled = false;
    int reps = 100;
    int T = 0;                 // 0 means: use the sample length
    bool unit_noise = false;   // identity shocks instead of Cholesky-scaled
  } mc;
  double significance_level = 0.05;  // for the cycle verdict
  int df_lags = 0;
  int lb_lags = 1;
  std::string output_dir = ".";
};

// Parses a headered CSV with '.' decimals, checks year contiguity and
// numeric cells (errors carry the offending row number), optionally logs
// the real column, and validates the resulting pair.
SeriesPair ingest(const std::string& path, const std::string& year_column,
                  const std::string& real_column,
                  const std::string& financial_column, bool log_real);

// End-to-end run: ingest -> HP filter -> unit-root tests -> EM estimation ->
// cycle diagnosis -> per-regime Ljung-Box -> optional Monte Carlo ->
// artifact files (estimates.json/.csv, probabilities.csv, unit_root.csv,
// ljung_box.csv, monte_carlo.csv, verdict.txt) in config.output_dir.
// Returns a process exit code: 0 success, 1 validation error,
// 2 estimation failure, 3 I/O error. Stage-tagged diagnostics go to err;
// partially written outputs are removed on failure.
int run_pipeline(const PipelineConfig& config, std::ostream& err);
int run_pipeline(const PipelineConfig& config);  // errors to stderr

}  // namespace mscycles
