import math

import numpy as np
import pytest
from scipy import stats

from app.core.errors import NumericalError, ParameterError
from app.services.analytic_service import analytic_service
from app.services.montecarlo import (
    build_scene,
    estimate_interference_mgf,
    estimate_metrics,
    mvdr_filter,
    run_comm_snapshot,
    run_radar_snapshot,
    sample_interference,
    sample_ppp,
    snapshot_rng,
    steering_vector,
    zf_precoder,
)
from app.services.montecarlo.beamforming import output_power, rayleigh_channel
from app.services.montecarlo.simulator import simulate_sinr, summarize


class TestPointProcess:
    def test_count_statistics(self):
        rng = np.random.default_rng(2024)
        density, radius = 1e-4, 500.0
        counts = np.array([sample_ppp(density, radius, rng).shape[0] for _ in range(10_000)])
        expected = density * math.pi * radius ** 2
        assert counts.mean() == pytest.approx(expected, rel=0.01)
        assert counts.var(ddof=1) == pytest.approx(expected, rel=0.05)

    def test_points_uniform_on_disc(self):
        points = sample_ppp(0.1, 200.0, 9)
        rho_sq = np.sum(points ** 2, axis=1) / 200.0 ** 2
        assert np.all(rho_sq <= 1.0)
        assert rho_sq.mean() == pytest.approx(0.5, abs=0.02)

    def test_cells_of_equal_area_are_equally_filled(self):
        points = sample_ppp(0.1, 200.0, 31)
        rho_sq = np.sum(points ** 2, axis=1) / 200.0 ** 2
        phi = np.arctan2(points[:, 1], points[:, 0])
        counts, _, _ = np.histogram2d(rho_sq, phi, bins=(10, 8), range=((0.0, 1.0), (-math.pi, math.pi)))
        assert stats.chisquare(counts.ravel()).pvalue > 1e-3

    def test_invalid_arguments(self):
        with pytest.raises(ParameterError):
            sample_ppp(-1.0, 10.0, 0)
        with pytest.raises(ParameterError):
            sample_ppp(1e-3, 0.0, 0)

    def test_scene_layout(self, network):
        scene = build_scene(network, snapshot_rng(1, 0), full=True)
        assert scene.bs_count >= 1
        assert scene.radius == pytest.approx(network.network_radius)
        assert np.max(np.linalg.norm(scene.bs_positions, axis=1)) <= scene.radius
        assert np.array_equal(scene.user_positions[0], [0.0, 0.0])
        assert scene.target_positions[0, 2] == network.h_t
        assert set(scene.user_association) == set(range(scene.user_positions.shape[0]))

    def test_streams_are_counter_based(self):
        first = snapshot_rng(7, 3).random(4)
        again = snapshot_rng(7, 3).random(4)
        other = snapshot_rng(7, 4).random(4)
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other)


class TestArrayProcessing:
    def test_steering_vector(self):
        assert np.allclose(steering_vector(0.0, 8), np.ones(8))
        assert np.linalg.norm(steering_vector(0.4, 8)) ** 2 == pytest.approx(8.0)
        with pytest.raises(ParameterError):
            steering_vector(2.0, 8)

    def test_zero_forcing_nulls_other_users(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            h = rayleigh_channel(rng, 3, 4)
            w, varsigma = zf_precoder(h)
            effective = h @ w
            off_diagonal = effective - np.diag(np.diag(effective))
            assert np.max(np.abs(off_diagonal)) < 1e-10
            assert np.allclose(np.linalg.norm(w, axis=0), 1.0)
            assert np.allclose(np.abs(np.diag(effective)) ** 2, varsigma)

    def test_zero_forcing_rejects_rank_deficient_channel(self):
        row = rayleigh_channel(np.random.default_rng(2), 1, 4)
        with pytest.raises(NumericalError):
            zf_precoder(np.vstack([row, row]))

    def test_mvdr_is_distortionless_and_optimal(self):
        rng = np.random.default_rng(4)
        a = steering_vector(0.3, 8)
        for _ in range(20):
            z = rayleigh_channel(rng, 8, 5)
            covariance = 1e-3 * np.eye(8) + z @ z.conj().T
            w = mvdr_filter(covariance, a)
            assert abs(np.vdot(w, a) - 1.0) < 1e-12
            best = output_power(w, covariance)
            for _ in range(5):
                v = rayleigh_channel(rng, 8)
                v = v - a * np.vdot(a, v) / np.vdot(a, a)
                assert output_power(w + 0.1 * v, covariance) >= best * (1 - 1e-8)

    def test_mvdr_rejects_indefinite_covariance(self):
        with pytest.raises(NumericalError):
            mvdr_filter(-np.eye(4), steering_vector(0.0, 4))


class TestSnapshots:
    def test_snapshot_sinr_positive_and_reproducible(self, network):
        comm, _ = run_comm_snapshot(network, 11)
        radar, _ = run_radar_snapshot(network, 11)
        assert comm > 0 and radar > 0
        assert run_comm_snapshot(network, 11)[0] == comm

    def test_identical_across_parallelism(self, network):
        serial = simulate_sinr(network, 300, 5, workers=1, chunk_size=300)
        chunked = simulate_sinr(network, 300, 5, workers=1, chunk_size=70)
        parallel = simulate_sinr(network, 300, 5, workers=2, chunk_size=100)
        assert np.array_equal(serial, chunked)
        assert np.array_equal(serial, parallel)

    def test_coverage_invariant_to_power_without_noise(self, network, power):
        quiet = network.replace(noise_dbm=-300.0)
        base = estimate_metrics(quiet, power, 200, 3)
        louder = estimate_metrics(quiet.replace(p_tx_dbm=46.0), power, 200, 3)
        assert louder.coverage_comm.mean == base.coverage_comm.mean
        assert louder.coverage_radar.mean == base.coverage_radar.mean

    def test_metric_estimates(self, network, power, tmp_path):
        records = tmp_path / "records.csv"
        estimates = estimate_metrics(network, power, 200, 8, record_path=str(records))
        for metric in (estimates.coverage_comm, estimates.coverage_radar):
            assert 0.0 <= metric.mean <= 1.0
            assert metric.trials == 200 and metric.seed == 8
        expected_ee = (estimates.pse_comm.mean + estimates.pse_radar.mean) / (network.lambda_b * power.per_bs_power_w)
        assert estimates.ee.mean == pytest.approx(expected_ee, rel=1e-9)
        lines = records.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "snapshot_id,sinr_comm,sinr_radar"
        assert len(lines) == 201

    def test_too_few_trials(self, network, power):
        with pytest.raises(ParameterError):
            estimate_metrics(network, power, 50, 1)

    def test_summary_interval(self):
        estimate = summarize(np.array([0.0, 1.0] * 50), seed=1)
        half_width = 1.959963984540054 * np.std([0.0, 1.0] * 50, ddof=1) / 10.0
        assert estimate.mean == pytest.approx(0.5)
        assert estimate.half_width == pytest.approx(half_width)


class TestInterferenceSampling:
    def test_sampled_mgf_matches_closed_form(self, network):
        exact = analytic_service.mgf_interference(0.5, network)
        estimate = estimate_interference_mgf(network, 0.5, 20000, 21, d_min=50.0)
        assert abs(estimate.mean - exact) <= 4 * estimate.half_width + 1e-3

    def test_sampled_mean_matches_closed_form(self, network):
        draws = sample_interference(network, 50000, 4, d_min=50.0)
        assert draws.mean() == pytest.approx(analytic_service.mean_interference(network), rel=0.03)


class TestEngineAgreement:
    def test_short_run_brackets_closed_form(self, network, power):
        analytic = analytic_service.analyze(network, power)
        simulated = estimate_metrics(network, power, 600, 17)
        for metric in ("coverage_comm", "coverage_radar"):
            estimate = getattr(simulated, metric)
            assert abs(estimate.mean - getattr(analytic, metric)) <= 2 * estimate.half_width + 0.02
        assert abs(simulated.ee.mean - analytic.ee) <= 2 * simulated.ee.half_width + 0.03 * analytic.ee

    def test_elevated_target_is_rarely_detected(self, network, power):
        high = network.replace(h_t=200.0)
        simulated = estimate_metrics(high, power, 400, 5)
        assert simulated.coverage_radar.mean <= 0.03
        assert analytic_service.coverage_prob_radar(high) <= 0.03


@pytest.mark.slow
def test_full_size_run_agrees_with_closed_form(config_path, tmp_path):
    from app.services.sweep_service import sweep_service

    first = sweep_service.run_validate(str(config_path), 100_000, 2024, str(tmp_path / "a.json"))
    second = sweep_service.run_validate(str(config_path), 100_000, 2024, str(tmp_path / "b.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert first.trials == 100_000 and not first.warnings
    assert [row.metric for row in second.rows] == ["coverage_comm", "coverage_radar", "pse_comm", "pse_radar", "ee"]
    assert first.passed, [row.metric for row in first.rows if not row.passed]
