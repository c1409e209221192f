"""Smoke tests for the python bindings: one pass over each exposed surface."""

import math

import pytest

import mscycles as ms


def usa_model():
    m = ms.MsVarModel()
    m.regime1 = ms.RegimeCoefficients.full(0.8215, -0.1066, 1.6348, 0.4027)
    m.regime2 = ms.RegimeCoefficients.diagonal(0.5389, 0.9884)
    m.sigma1 = ms.Covariance2(1.0, 0.0, 1.0)
    m.sigma2 = ms.Covariance2(1.0, 0.0, 1.0)
    m.trans = ms.TransitionMatrix(0.837, 0.163, 0.132, 0.868)
    m.init_dist = ms.ergodic_distribution(m.trans)
    return m


def test_model_validation_and_json():
    m = usa_model()
    assert ms.validate_model(m) == []
    text = ms.model_to_json(m)
    back = ms.model_from_json(text)
    assert back.regime1.a11 == m.regime1.a11
    assert back.trans.p22 == m.trans.p22

    m.trans = ms.TransitionMatrix(0.6, 0.6, 0.1, 0.9)
    assert any("row 1" in v for v in ms.validate_model(m))


def test_diagonal_restriction_is_enforced():
    with pytest.raises(ValueError):
        ms.RegimeCoefficients.from_entries(0.5, 0.1, 0.0, 0.9, ms.Restriction.Diagonal)


def test_hp_decompose_linear_series():
    series = [2.0 + 3.0 * t for t in range(20)]
    trend, cycle = ms.hp_decompose(series, 100.0)
    assert max(abs(c) for c in cycle) < 1e-10
    assert all(abs(t + c - s) < 1e-12 for t, c, s in zip(trend, cycle, series))


def test_diagnose_and_classify():
    diag = ms.diagnose(ms.RegimeCoefficients.full(0.8215, -0.1066, 1.6348, 0.4027))
    assert diag.oscillatory and diag.minsky_signs
    assert diag.discriminant == pytest.approx(-0.5217, abs=1e-4)
    verdict = ms.classify_minsky(diag, True, True)
    assert ms.verdict_string(verdict) == "minsky"


def test_simulate_estimate_round_trip():
    sim = ms.simulate(usa_model(), 150, 7)
    assert len(sim.series) == 150
    assert set(sim.regimes) <= {1, 2}

    cfg = ms.EstimateConfig()
    cfg.restarts = 3
    cfg.seed = 7
    result = ms.estimate(sim.series, cfg)
    assert result.converged
    assert result.model.regime1.a12 < 0.0
    assert result.model.regime1.a21 > 0.0
    assert result.model.regime2.a12 == 0.0
    # filter rows are probability distributions
    for row in result.filter.smoothed:
        assert row[0] + row[1] == pytest.approx(1.0, abs=1e-9)

    lb = ms.ljung_box(ms.regime_residuals(result, sim.series).eps, 1, 0.01)
    assert lb.critical_value == 6.63


def test_statistical_tests():
    report = ms.df_test([math.sin(0.7 * t) for t in range(120)])
    assert report.critical_value == -1.94
    assert report.reject_null


def test_pipeline_end_to_end(tmp_path):
    sim = ms.simulate(usa_model(), 100, 1)
    csv = tmp_path / "data.csv"
    lines = ["year,gdp,debt"]
    for t in range(100):
        gdp = math.exp(0.025 * t + 0.02 * sim.series.y[t])
        debt = 50.0 + 0.8 * t + 0.02 * sim.series.f[t]
        lines.append(f"{1920 + t},{gdp!r},{debt!r}")
    csv.write_text("\n".join(lines) + "\n")

    cfg = ms.PipelineConfig()
    cfg.input_path = str(csv)
    cfg.real_column = "gdp"
    cfg.financial_column = "debt"
    cfg.log_real = True
    cfg.est.seed = 1
    cfg.output_dir = str(tmp_path / "out")
    assert ms.run_pipeline(cfg) == 0
    verdict = (tmp_path / "out" / "verdict.txt").read_text().splitlines()[0]
    assert verdict == "minsky"
    assert (tmp_path / "out" / "probabilities.csv").exists()
