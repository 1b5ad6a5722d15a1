import csv
import json

import pytest
from pydantic import ValidationError

from app.core.errors import ConfigFileError
from app.schemas.analysis import AnalysisResult
from app.schemas.network import NetworkConfig, PowerModel
from app.schemas.optimization import OptimizationMode
from app.schemas.simulation import MetricEstimates, SnapshotEstimate
from app.schemas.sweep import Engine, SweepSpec, SweepVariable
from app.services.sweep_service import CSV_HEADER, _write_atomically, apply_sweep_value, sweep_service


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.reader(handle))


def estimate(mean, half_width, trials=20000):
    return SnapshotEstimate(mean=mean, ci_low=mean - half_width, ci_high=mean + half_width, trials=trials, seed=1)


class TestSweepSpec:
    def test_values_must_be_monotone(self):
        with pytest.raises(ValidationError):
            SweepSpec(variable=SweepVariable.H_T, values=[1.5, 50.0, 20.0])
        with pytest.raises(ValidationError):
            SweepSpec(variable=SweepVariable.H_T, values=[])

    def test_montecarlo_needs_trials(self):
        with pytest.raises(ValidationError):
            SweepSpec(variable=SweepVariable.H_T, values=[1.5], engines={Engine.MONTECARLO}, trials=50)

    def test_engine_order_is_fixed(self):
        spec = SweepSpec(variable=SweepVariable.H_T, values=[1.5], engines={Engine.MONTECARLO, Engine.ANALYTIC})
        assert spec.ordered_engines == [Engine.ANALYTIC, Engine.MONTECARLO]


class TestSweepValues:
    def test_joint_threshold(self):
        cfg, _ = apply_sweep_value(NetworkConfig(), PowerModel(), SweepVariable.GAMMA_JOINT, 5.0)
        assert cfg.gamma_c_db == cfg.gamma_r_db == 5.0

    def test_transmit_power_moves_power_draw(self):
        cfg, pm = apply_sweep_value(NetworkConfig(), PowerModel(), SweepVariable.P_TX_DBM, 30.0)
        assert cfg.p_tx_dbm == 30.0
        assert pm.p_tx_bar_dbm == 30.0

    def test_density_keeps_user_ratio(self):
        cfg, _ = apply_sweep_value(NetworkConfig(), PowerModel(), SweepVariable.LAMBDA_B, 1e-3)
        assert cfg.lambda_b == 1e-3
        assert cfg.lambda_u >= 10 * cfg.lambda_b


class TestRunSweep:
    def test_analytic_density_sweep(self, config_path, tmp_path):
        out = tmp_path / "density.csv"
        values = [1e-7 * 10 ** (k / 3) for k in range(10)]
        spec = SweepSpec(variable=SweepVariable.LAMBDA_B, values=values)
        summary = sweep_service.run_sweep(str(config_path), spec, str(out), workers=1)
        rows = read_rows(out)
        assert rows[0] == CSV_HEADER
        assert summary.rows == len(rows) - 1 == 10
        for row in rows[1:]:
            assert row[0] == "lambda_b" and row[2] == "analytic"
            assert row[8:] == ["", "", "", ""]
            assert float(row[7]) > 0
        assert out.read_bytes().count(b"\r") == 0

    def test_both_engines_deterministic(self, config_path, tmp_path):
        spec = SweepSpec(
            variable=SweepVariable.H_T,
            values=[1.5, 50.0],
            engines={Engine.ANALYTIC, Engine.MONTECARLO},
            trials=200,
            seed=9,
        )
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        sweep_service.run_sweep(str(config_path), spec, str(first), workers=1)
        sweep_service.run_sweep(str(config_path), spec, str(second), workers=1)
        assert first.read_bytes() == second.read_bytes()

        rows = read_rows(first)[1:]
        assert [(row[1], row[2]) for row in rows] == [
            ("1.5", "analytic"), ("1.5", "montecarlo"), ("50.0", "analytic"), ("50.0", "montecarlo"),
        ]
        mc = rows[1]
        assert float(mc[8]) <= float(mc[7]) <= float(mc[9])
        assert mc[10:] == ["200", "9"]

    def test_transmit_power_sweep(self, config_path, tmp_path):
        out = tmp_path / "power.csv"
        spec = SweepSpec(variable=SweepVariable.P_TX_DBM, values=[20.0, 25.0, 30.0, 35.0, 50.0, 65.0])
        sweep_service.run_sweep(str(config_path), spec, str(out), workers=1)
        ee = {float(row[1]): float(row[7]) for row in read_rows(out)[1:]}
        low_power = [ee[p] for p in (20.0, 25.0, 30.0, 35.0)]
        # interference-limited below 35 dBm: the circuit power dominates the draw
        assert max(low_power) / min(low_power) - 1.0 < 0.05
        assert ee[50.0] < ee[35.0]
        assert ee[65.0] < 0.1 * ee[35.0]

    def test_bad_config_leaves_no_output(self, tmp_path):
        config = tmp_path / "bad.conf"
        config.write_text("alpha = 2.7\nwhat = 1\n", encoding="utf-8")
        out = tmp_path / "out.csv"
        spec = SweepSpec(variable=SweepVariable.H_T, values=[1.5])
        with pytest.raises(ConfigFileError) as info:
            sweep_service.run_sweep(str(config), spec, str(out))
        assert info.value.line_number == 2
        assert not out.exists()

    def test_atomic_write_cleans_up(self, tmp_path):
        target = tmp_path / "result.csv"

        def failing(handle):
            handle.write("partial")
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            _write_atomically(str(target), failing)
        assert list(tmp_path.iterdir()) == []


class TestOptimizeAndValidate:
    def test_run_optimize_writes_json(self, config_path, tmp_path):
        out = tmp_path / "radar.json"
        result = sweep_service.run_optimize(str(config_path), OptimizationMode.RADAR_ONLY, str(out))
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["cell_radius_m"] == pytest.approx(result.cell_radius)
        assert payload["result"]["mode"] == "radar_only"
        assert "branches" in payload["result"]["details"]["cubic"]

    def test_compare_flags_offending_metric(self):
        analytic = AnalysisResult(
            lambda_b=1e-5, coverage_comm=0.5, coverage_radar=0.9, pse_comm=1.0, pse_radar=2.0,
            ee=3.0, ee_comm=1.0, ee_radar=2.0, power_density_w_m2=1.0, quad_order=20,
        )
        simulated = MetricEstimates(
            coverage_comm=estimate(0.52, 0.01),
            coverage_radar=estimate(0.5, 0.01),
            pse_comm=estimate(1.0, 0.05),
            pse_radar=estimate(2.1, 0.05),
            ee=estimate(3.1, 0.1),
        )
        report = sweep_service.compare(analytic, simulated, seed=1)
        assert not report.passed
        assert report.failed_metrics == ["coverage_radar"]
        assert report.warnings == []

    def test_small_run_warns(self, config_path, tmp_path):
        out = tmp_path / "report.json"
        report = sweep_service.run_validate(str(config_path), 100, 3, str(out), workers=1)
        assert report.trials == 100
        assert any("insufficient precision" in warning for warning in report.warnings)
        assert json.loads(out.read_text(encoding="utf-8"))["seed"] == 3
