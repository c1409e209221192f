#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mscycles/diagnostics.hpp"
#include "mscycles/estimation.hpp"
#include "mscycles/hp_filter.hpp"
#include "mscycles/json_io.hpp"
#include "mscycles/model.hpp"
#include "mscycles/monte_carlo.hpp"
#include "mscycles/pipeline.hpp"
#include "mscycles/stat_tests.hpp"

namespace py = pybind11;
using namespace mscycles;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Markov-switching VAR estimation and real-financial cycle "
            "classification for yearly bivariate series";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<estimation_error>(m, "EstimationError", PyExc_RuntimeError);
  py::register_exception<io_error>(m, "IoError", PyExc_OSError);

  py::class_<SeriesPair>(m, "SeriesPair")
      .def(py::init<>())
      .def(py::init([](std::vector<int> years, std::vector<double> y,
                       std::vector<double> f, std::array<std::string, 2> labels) {
             return SeriesPair{std::move(years), std::move(y), std::move(f),
                               std::move(labels)};
           }),
           py::arg("years"), py::arg("y"), py::arg("f"),
           py::arg("labels") = std::array<std::string, 2>{"real", "financial"})
      .def_readwrite("years", &SeriesPair::years)
      .def_readwrite("y", &SeriesPair::y)
      .def_readwrite("f", &SeriesPair::f)
      .def_readwrite("labels", &SeriesPair::labels)
      .def("__len__", &SeriesPair::size)
      .def("violations", &SeriesPair::violations)
      .def("validate", &SeriesPair::validate);

  py::enum_<Restriction>(m, "Restriction")
      .value("Full", Restriction::Full)
      .value("Diagonal", Restriction::Diagonal);

  py::class_<RegimeCoefficients>(m, "RegimeCoefficients")
      .def_static("full", &RegimeCoefficients::full, py::arg("a11"), py::arg("a12"),
                  py::arg("a21"), py::arg("a22"))
      .def_static("diagonal", &RegimeCoefficients::diagonal, py::arg("d1"), py::arg("d2"))
      .def_static("from_entries", &RegimeCoefficients::from_entries)
      .def_readwrite("a11", &RegimeCoefficients::a11)
      .def_readwrite("a12", &RegimeCoefficients::a12)
      .def_readwrite("a21", &RegimeCoefficients::a21)
      .def_readwrite("a22", &RegimeCoefficients::a22)
      .def_readonly("restriction", &RegimeCoefficients::restriction)
      .def("apply", &RegimeCoefficients::apply);

  py::class_<Covariance2>(m, "Covariance2")
      .def(py::init<>())
      .def(py::init([](double v11, double v12, double v22) {
             return Covariance2{v11, v12, v22};
           }),
           py::arg("v11"), py::arg("v12"), py::arg("v22"))
      .def_readwrite("v11", &Covariance2::v11)
      .def_readwrite("v12", &Covariance2::v12)
      .def_readwrite("v22", &Covariance2::v22)
      .def("det", &Covariance2::det)
      .def("positive_definite", &Covariance2::positive_definite);

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def(py::init<>())
      .def(py::init([](double p11, double p12, double p21, double p22) {
             return TransitionMatrix{p11, p12, p21, p22};
           }),
           py::arg("p11"), py::arg("p12"), py::arg("p21"), py::arg("p22"))
      .def_readwrite("p11", &TransitionMatrix::p11)
      .def_readwrite("p12", &TransitionMatrix::p12)
      .def_readwrite("p21", &TransitionMatrix::p21)
      .def_readwrite("p22", &TransitionMatrix::p22);

  m.def("ergodic_distribution", &ergodic_distribution);

  py::class_<MsVarModel>(m, "MsVarModel")
      .def(py::init<>())
      .def_static("with_ergodic_init", &MsVarModel::with_ergodic_init)
      .def_readwrite("regime1", &MsVarModel::regime1)
      .def_readwrite("regime2", &MsVarModel::regime2)
      .def_readwrite("sigma1", &MsVarModel::sigma1)
      .def_readwrite("sigma2", &MsVarModel::sigma2)
      .def_readwrite("trans", &MsVarModel::trans)
      .def_readwrite("init_dist", &MsVarModel::init_dist);

  m.def("validate_model", &validate_model,
        "Every violated model invariant, as strings; empty means valid");
  m.def("model_to_json", &model_to_json, py::arg("model"), py::arg("indent") = 2);
  m.def("model_from_json", &model_from_json);
  m.def("estimation_to_json", &estimation_to_json, py::arg("result"),
        py::arg("indent") = 2);

  m.def(
      "hp_decompose",
      [](const std::vector<double>& series, double lambda) {
        const HpResult r = hp_decompose(series, HpConfig{lambda});
        return py::make_tuple(r.trend, r.cycle);
      },
      py::arg("series"), py::arg("lambda_") = 100.0,
      "Trend/cycle split through the penalized least-squares filter");

  py::class_<FilterOutput>(m, "FilterOutput")
      .def_readonly("filtered", &FilterOutput::filtered)
      .def_readonly("predicted", &FilterOutput::predicted)
      .def_readonly("smoothed", &FilterOutput::smoothed)
      .def_readonly("loglik", &FilterOutput::loglik);

  py::class_<StdErrors>(m, "StdErrors")
      .def_readonly("a1", &StdErrors::a1)
      .def_readonly("a2", &StdErrors::a2)
      .def_readonly("sigma1", &StdErrors::sigma1)
      .def_readonly("sigma2", &StdErrors::sigma2)
      .def_readonly("trans", &StdErrors::trans)
      .def_readonly("hessian_warning", &StdErrors::hessian_warning);

  py::class_<EstimateConfig>(m, "EstimateConfig")
      .def(py::init<>())
      .def_readwrite("max_iter", &EstimateConfig::max_iter)
      .def_readwrite("tol", &EstimateConfig::tol)
      .def_readwrite("restarts", &EstimateConfig::restarts)
      .def_readwrite("seed", &EstimateConfig::seed);

  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("model", &EstimationResult::model)
      .def_readonly("std_errors", &EstimationResult::std_errors)
      .def_readonly("filter", &EstimationResult::filter)
      .def_readonly("iterations", &EstimationResult::iterations)
      .def_readonly("converged", &EstimationResult::converged)
      .def_readonly("loglik_path", &EstimationResult::loglik_path)
      .def_readonly("best_restart", &EstimationResult::best_restart);

  m.def("conditional_density", &conditional_density);
  m.def("hamilton_filter", &hamilton_filter);
  m.def("kim_smoother", &kim_smoother);
  m.def("em_step", &em_step);
  m.def("estimate", &estimate, py::arg("data"), py::arg("config") = EstimateConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("std_errors", &std_errors);

  py::class_<CycleDiagnosis>(m, "CycleDiagnosis")
      .def_readonly("trace", &CycleDiagnosis::trace)
      .def_readonly("determinant", &CycleDiagnosis::determinant)
      .def_readonly("discriminant", &CycleDiagnosis::discriminant)
      .def_readonly("eigenvalues", &CycleDiagnosis::eigenvalues)
      .def_readonly("modulus", &CycleDiagnosis::modulus)
      .def_readonly("oscillatory", &CycleDiagnosis::oscillatory)
      .def_readonly("necessary_condition", &CycleDiagnosis::necessary_condition)
      .def_readonly("minsky_signs", &CycleDiagnosis::minsky_signs)
      .def_readonly("stable", &CycleDiagnosis::stable);

  py::enum_<Verdict>(m, "Verdict")
      .value("MinskyCycle", Verdict::MinskyCycle)
      .value("NonMinskyCycle", Verdict::NonMinskyCycle)
      .value("NoCycle", Verdict::NoCycle)
      .value("NotSignificant", Verdict::NotSignificant);

  m.def("verdict_string", [](Verdict v) { return to_string(v); });
  m.def("diagnose", &diagnose);
  m.def("classify_minsky", &classify_minsky, py::arg("diag"),
        py::arg("a12_significant"), py::arg("a21_significant"));
  m.def("significance_threshold", &significance_threshold);
  m.def("is_significant", &is_significant);

  py::class_<TestReport>(m, "TestReport")
      .def_readonly("statistic", &TestReport::statistic)
      .def_readonly("critical_value", &TestReport::critical_value)
      .def_readonly("significance", &TestReport::significance)
      .def_readonly("reject_null", &TestReport::reject_null)
      .def_readonly("null_description", &TestReport::null_description)
      .def_readonly("left_tail", &TestReport::left_tail)
      .def_readonly("low_sample_warning", &TestReport::low_sample_warning);

  m.def("df_test", &df_test, py::arg("series"), py::arg("lags") = 0,
        py::arg("level") = 0.05);
  m.def("ljung_box", &ljung_box, py::arg("residuals"), py::arg("lags") = 1,
        py::arg("level") = 0.01);
  m.def("df_critical_value", &df_critical_value);
  m.def("chi_square_critical_value", &chi_square_critical_value);

  py::class_<RegimeResiduals>(m, "RegimeResiduals")
      .def_readonly("eps", &RegimeResiduals::eps)
      .def_readonly("phi", &RegimeResiduals::phi)
      .def_readonly("delta", &RegimeResiduals::delta)
      .def_readonly("rho", &RegimeResiduals::rho)
      .def_readonly("regime1_years", &RegimeResiduals::regime1_years)
      .def_readonly("regime2_years", &RegimeResiduals::regime2_years)
      .def_readonly("regime1_low_sample", &RegimeResiduals::regime1_low_sample)
      .def_readonly("regime2_low_sample", &RegimeResiduals::regime2_low_sample);

  m.def("regime_residuals", &regime_residuals);

  py::class_<SimOptions>(m, "SimOptions")
      .def(py::init<>())
      .def_readwrite("burn_in", &SimOptions::burn_in)
      .def_readwrite("unit_noise", &SimOptions::unit_noise)
      .def_readwrite("start", &SimOptions::start);

  py::class_<SimulatedSeries>(m, "SimulatedSeries")
      .def_readonly("series", &SimulatedSeries::series)
      .def_readonly("regimes", &SimulatedSeries::regimes);

  m.def("simulate", &simulate, py::arg("model"), py::arg("T"), py::arg("seed"),
        py::arg("options") = SimOptions{});

  py::class_<McSummary>(m, "McSummary")
      .def_readonly("names", &McSummary::names)
      .def_readonly("means", &McSummary::means)
      .def_readonly("ci_low", &McSummary::ci_low)
      .def_readonly("ci_high", &McSummary::ci_high)
      .def_readonly("mean_transition", &McSummary::mean_transition)
      .def_readonly("n_success", &McSummary::n_success)
      .def_readonly("n_total", &McSummary::n_total)
      .def_readonly("failures", &McSummary::failures);

  m.def("mc_study", &mc_study, py::arg("model"), py::arg("reps"), py::arg("T"),
        py::arg("master_seed"), py::arg("est_config") = EstimateConfig{},
        py::arg("unit_noise") = false, py::call_guard<py::gil_scoped_release>());

  py::class_<PipelineConfig::McConfig>(m, "McConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &PipelineConfig::McConfig::enabled)
      .def_readwrite("reps", &PipelineConfig::McConfig::reps)
      .def_readwrite("T", &PipelineConfig::McConfig::T)
      .def_readwrite("unit_noise", &PipelineConfig::McConfig::unit_noise);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("input_path", &PipelineConfig::input_path)
      .def_readwrite("year_column", &PipelineConfig::year_column)
      .def_readwrite("real_column", &PipelineConfig::real_column)
      .def_readwrite("financial_column", &PipelineConfig::financial_column)
      .def_readwrite("log_real", &PipelineConfig::log_real)
      .def_readwrite("lambda_", &PipelineConfig::lambda)
      .def_readwrite("est", &PipelineConfig::est)
      .def_readwrite("mc", &PipelineConfig::mc)
      .def_readwrite("significance_level", &PipelineConfig::significance_level)
      .def_readwrite("df_lags", &PipelineConfig::df_lags)
      .def_readwrite("lb_lags", &PipelineConfig::lb_lags)
      .def_readwrite("output_dir", &PipelineConfig::output_dir);

  m.def("ingest", &ingest, py::arg("path"), py::arg("year_column"),
        py::arg("real_column"), py::arg("financial_column"),
        py::arg("log_real") = false);
  m.def(
      "run_pipeline",
      [](const PipelineConfig& config) { return run_pipeline(config); },
      py::arg("config"), py::call_guard<py::gil_scoped_release>(),
      "Runs the full pipeline; returns the process exit code");

  m.attr("__version__") = "0.1.0";
}
