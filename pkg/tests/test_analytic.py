import math

import numpy as np
import pytest

from app.core.errors import DomainError, ParameterError
from app.schemas.analysis import RadialMapping
from app.schemas.network import NetworkConfig, PowerModel
from app.schemas.optimization import OptimizationMode
from app.services.analytic_service import analytic_service
from app.services.common.numerics import gauss_laguerre
from app.services.montecarlo import sample_interference
from app.services.optimizer_service import optimizer_service

CDF_POINTS = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0]


class TestCoverage:
    def test_probabilities_in_unit_interval(self, network):
        for mapping in RadialMapping:
            comm = analytic_service.coverage_prob_comm(network, mapping=mapping)
            radar = analytic_service.coverage_prob_radar(network, mapping=mapping)
            assert 0.0 <= comm <= 1.0
            assert 0.0 <= radar <= 1.0

    def test_empty_network(self):
        empty = NetworkConfig(lambda_b=0.0)
        assert analytic_service.coverage_prob_comm(empty) == 0.0
        assert analytic_service.coverage_prob_radar(empty) == 0.0
        assert analytic_service.pse_comm(empty) == 0.0
        assert analytic_service.pse_radar(empty) == 0.0
        with pytest.raises(ParameterError):
            analytic_service.energy_efficiency(empty, PowerModel())

    def test_comm_coverage_non_increasing_in_threshold(self, network):
        values = [
            analytic_service.coverage_prob_comm(network.replace(gamma_c_db=g))
            for g in (-5.0, 0.0, 5.0, 10.0, 20.0)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
        assert values[0] > values[-1]

    def test_radar_coverage_non_increasing_in_threshold(self, network):
        values = [
            analytic_service.coverage_prob_radar(network.replace(gamma_r_db=g))
            for g in (-5.0, 0.0, 5.0, 10.0, 20.0, 40.0)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_radar_coverage_drops_with_altitude(self, network):
        pse = [analytic_service.pse_radar(network.replace(h_t=h)) for h in (1.5, 50.0, 200.0)]
        assert pse[0] > pse[1] > pse[2] > 0.0
        assert pse[2] < 0.1 * pse[0]

    def test_target_height_ignored_without_shift(self, network):
        flat = network.replace(shift_radar_nodes=False)
        assert analytic_service.coverage_prob_radar(flat.replace(h_t=200.0)) == pytest.approx(
            analytic_service.coverage_prob_radar(flat), rel=1e-12
        )

    def test_quadrature_order_converged(self, network):
        for method in (analytic_service.coverage_prob_comm, analytic_service.coverage_prob_radar):
            coarse = method(network, rule=gauss_laguerre(20))
            fine = method(network, rule=gauss_laguerre(30))
            assert coarse == pytest.approx(fine, abs=5e-3)

    def test_pse_scales_with_rate(self, network):
        coverage = analytic_service.coverage_prob_comm(network)
        assert analytic_service.pse_comm(network) == pytest.approx(
            network.lambda_b * math.log2(1.0 + network.gamma_c) * coverage
        )

    def test_exact_coverage_orders_with_threshold(self, network):
        rule = gauss_laguerre(6)
        relaxed = analytic_service.coverage_prob_comm_exact(network.replace(gamma_c_db=0.0), rule=rule)
        strict = analytic_service.coverage_prob_comm_exact(network.replace(gamma_c_db=10.0), rule=rule)
        assert 0.0 <= strict <= relaxed <= 1.0


class TestEnergyEfficiency:
    def test_single_interior_peak(self, network, power):
        grid = np.geomspace(1e-7, 1e-3, 100)
        for h_t in (1.5, 50.0, 200.0):
            result = optimizer_service.grid_search(network.replace(h_t=h_t), power, grid, objective="analytic")
            assert result.unimodal, h_t
            assert 0 < result.details["index"] < grid.size - 1, h_t

    def test_peak_moves_down_for_high_targets(self, network, power):
        grid = np.geomspace(1e-7, 1e-3, 40)
        peaks = [
            optimizer_service.grid_search(network.replace(h_t=h_t), power, grid, objective="analytic").lambda_star
            for h_t in (1.5, 200.0)
        ]
        assert peaks[1] < peaks[0]

    def test_breakdown_adds_up(self, network, power):
        result = analytic_service.analyze(network, power)
        assert result.ee == pytest.approx(result.ee_comm + result.ee_radar, rel=1e-12)
        assert result.ee == pytest.approx((result.pse_comm + result.pse_radar) / result.power_density_w_m2, rel=1e-12)
        assert analytic_service.energy_efficiency(network, power, include_radar=False) == pytest.approx(
            result.ee_comm, rel=1e-12
        )
        assert analytic_service.energy_efficiency(network, power, include_comm=False) == pytest.approx(
            result.ee_radar, rel=1e-12
        )

    def test_pse_in_area_units(self, network, power):
        result = analytic_service.analyze(network, power)
        assert result.pse_comm == pytest.approx(network.bandwidth_hz * analytic_service.pse_comm(network), rel=1e-12)

    def test_order_one_scaled_form_matches_objective(self, network, power):
        cfg = network.replace(r_ref=150.0)
        coef = optimizer_service.objective_coefficients(cfg, power)
        result = analytic_service.analyze(cfg, power, rule=gauss_laguerre(1), mapping=RadialMapping.SCALED)
        objective = float(optimizer_service.objective(coef, cfg.normalized_density, OptimizationMode.COMM_ONLY))
        assert result.ee_comm == pytest.approx(objective, rel=1e-10)


class TestInterferenceLaw:
    @pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
    def test_hypergeometric_matches_quadrature(self, network, s):
        closed = analytic_service.mgf_interference(s, network)
        numeric = analytic_service.mgf_interference(s, network, method="quadrature")
        assert closed == pytest.approx(numeric, rel=1e-7)
        assert 0.0 < closed < 1.0

    def test_unbounded_annulus(self, network):
        closed = analytic_service.mgf_interference(0.5, network, r_max=math.inf)
        numeric = analytic_service.mgf_interference(0.5, network, r_max=math.inf, method="quadrature")
        assert closed == pytest.approx(numeric, rel=1e-6)

    def test_mgf_domain(self, network):
        assert analytic_service.mgf_interference(0.0, network) == 1.0
        with pytest.raises(DomainError):
            analytic_service.mgf_interference(-1.0, network)

    def test_mgf_derivative_gives_mean(self, network):
        h = 1e-6
        slope = (1.0 - analytic_service.mgf_interference(h, network, method="quadrature")) / h
        assert slope == pytest.approx(analytic_service.mean_interference(network), rel=1e-4)

    def test_euler_matches_gil_pelaez(self, network):
        for x in CDF_POINTS:
            euler = analytic_service.cdf_interference_euler(x, network)
            gil_pelaez = analytic_service.cdf_interference_gilpelaez(x, network)
            assert euler == pytest.approx(gil_pelaez, abs=1e-3)

    def test_euler_cdf_is_monotone(self, network):
        values = [analytic_service.cdf_interference_euler(x, network) for x in CDF_POINTS]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))

    def test_euler_matches_sampled_interference(self, network):
        draws = sample_interference(network, 20000, 17, d_min=50.0)
        for x in CDF_POINTS:
            empirical = float(np.mean(draws <= x))
            assert analytic_service.cdf_interference_euler(x, network) == pytest.approx(empirical, abs=0.015)

    def test_dense_network_has_no_mass_near_zero(self, network):
        dense = network.with_density(1e-3)
        assert analytic_service.cdf_interference_euler(0.05, dense) <= 1e-3

    def test_rejects_nonpositive_argument(self, network):
        with pytest.raises(ParameterError):
            analytic_service.cdf_interference_euler(0.0, network)
