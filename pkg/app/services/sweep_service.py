"""
Batch runs behind the CLI: parameter sweeps to CSV, optimizer runs and
analytic-vs-simulation validation reports to JSON.
"""
import csv
import logging
import os
import tempfile
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, IO, List, Optional, Tuple

from app.config import settings
from app.schemas.analysis import AnalysisResult
from app.schemas.network import NetworkConfig, PowerModel
from app.schemas.optimization import OptimizationMode, OptimizationResponse, OptimizationResult
from app.schemas.simulation import MetricEstimates
from app.schemas.sweep import (
    Engine,
    SweepSpec,
    SweepSummary,
    SweepVariable,
    ValidationReport,
    ValidationRow,
)
from app.services.analytic_service import analytic_service
from app.services.common.numerics import gauss_laguerre
from app.services.montecarlo import estimate_metrics
from app.services.optimizer_service import optimizer_service
from app.utils.config_file import parse_config_file

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "sweep_var",
    "value",
    "engine",
    "coverage_comm",
    "coverage_radar",
    "pse_comm",
    "pse_radar",
    "ee",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
]
VALIDATION_METRICS = ["coverage_comm", "coverage_radar", "pse_comm", "pse_radar", "ee"]
VALIDATION_MARGIN = 0.10
PRECISION_WARNING_TRIALS = 10_000


def apply_sweep_value(
    cfg: NetworkConfig, pm: PowerModel, variable: SweepVariable, value: float
) -> Tuple[NetworkConfig, PowerModel]:
    """Scenario at one sweep point"""
    if variable is SweepVariable.LAMBDA_B:
        return cfg.with_density(value), pm
    if variable is SweepVariable.GAMMA_JOINT:
        return cfg.replace(gamma_c_db=value, gamma_r_db=value), pm
    if variable is SweepVariable.GAMMA_C:
        return cfg.replace(gamma_c_db=value), pm
    if variable is SweepVariable.GAMMA_R:
        return cfg.replace(gamma_r_db=value), pm
    if variable is SweepVariable.P_TX_DBM:
        # the radiated power and the power draw move together
        return cfg.replace(p_tx_dbm=value), pm.replace(p_tx_bar_dbm=value)
    if variable is SweepVariable.H_T:
        return cfg.replace(h_t=value), pm
    return cfg.replace(r_area=value), pm


def _format(value: float) -> str:
    return repr(float(value))


def _analytic_point(args: Tuple[NetworkConfig, PowerModel, int]) -> AnalysisResult:
    cfg, pm, quad_order = args
    return analytic_service.analyze(cfg, pm, rule=gauss_laguerre(quad_order))


def _write_atomically(output_path: str, write: Callable[[IO[str]], None]) -> None:
    """Write through a temporary sibling file; nothing is left behind on failure"""
    target = Path(output_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", dir=target.parent, prefix=f".{target.name}.", suffix=".tmp",
        delete=False, encoding="utf-8", newline="",
    )
    try:
        with handle:
            write(handle)
        os.replace(handle.name, target)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


class SweepService:
    def __init__(self) -> None:
        self.workers = settings.MC_WORKERS
        self.quad_order = settings.QUAD_ORDER

    # ------------------------------------------------------------------
    # Sweeps
    # ------------------------------------------------------------------

    def _analytic_results(self, points: List[Tuple[NetworkConfig, PowerModel]], quad_order: int, workers: int) -> List[AnalysisResult]:
        tasks = [(cfg, pm, quad_order) for cfg, pm in points]
        if workers > 1 and len(tasks) > 1:
            with Pool(processes=workers) as pool:
                return pool.map(_analytic_point, tasks)
        return [_analytic_point(task) for task in tasks]

    def run_sweep(
        self,
        config_path: str,
        spec: SweepSpec,
        output_path: str,
        workers: Optional[int] = None,
        quad_order: Optional[int] = None,
    ) -> SweepSummary:
        """One CSV row per sweep value per engine, in sweep order"""
        workers = workers or self.workers
        quad_order = quad_order or self.quad_order
        base_cfg, base_pm = parse_config_file(config_path)
        points = [apply_sweep_value(base_cfg, base_pm, spec.variable, value) for value in spec.values]
        logger.info(
            f"Sweeping {spec.variable.value} over {len(points)} points with engines "
            f"{[engine.value for engine in spec.ordered_engines]}"
        )

        analytic: List[AnalysisResult] = []
        simulated: List[MetricEstimates] = []
        if Engine.ANALYTIC in spec.engines:
            analytic = self._analytic_results(points, quad_order, workers)
        if Engine.MONTECARLO in spec.engines:
            simulated = [estimate_metrics(cfg, pm, spec.trials, spec.seed, workers=workers) for cfg, pm in points]

        rows: List[List[str]] = []
        for index, value in enumerate(spec.values):
            if analytic:
                result = analytic[index]
                rows.append([
                    spec.variable.value, _format(value), Engine.ANALYTIC.value,
                    _format(result.coverage_comm), _format(result.coverage_radar),
                    _format(result.pse_comm), _format(result.pse_radar), _format(result.ee),
                    "", "", "", "",
                ])
            if simulated:
                estimate = simulated[index]
                rows.append([
                    spec.variable.value, _format(value), Engine.MONTECARLO.value,
                    _format(estimate.coverage_comm.mean), _format(estimate.coverage_radar.mean),
                    _format(estimate.pse_comm.mean), _format(estimate.pse_radar.mean), _format(estimate.ee.mean),
                    _format(estimate.ee.ci_low), _format(estimate.ee.ci_high),
                    str(estimate.ee.trials), str(spec.seed),
                ])

        def write(handle: IO[str]) -> None:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)

        _write_atomically(output_path, write)
        logger.info(f"Sweep finished: {len(rows)} rows written to {output_path}")
        return SweepSummary(variable=spec.variable, points=len(points), rows=len(rows), output_path=str(output_path))

    # ------------------------------------------------------------------
    # Single runs
    # ------------------------------------------------------------------

    def run_analyze(self, config_path: str, output_path: Optional[str] = None, quad_order: Optional[int] = None) -> AnalysisResult:
        cfg, pm = parse_config_file(config_path)
        result = _analytic_point((cfg, pm, quad_order or self.quad_order))
        if output_path:
            _write_atomically(output_path, lambda handle: handle.write(result.model_dump_json(indent=2) + "\n"))
        return result

    def run_simulate(
        self,
        config_path: str,
        trials: int,
        seed: int,
        output_path: Optional[str] = None,
        workers: Optional[int] = None,
        record_path: Optional[str] = None,
    ) -> MetricEstimates:
        cfg, pm = parse_config_file(config_path)
        estimates = estimate_metrics(cfg, pm, trials, seed, workers=workers or self.workers, record_path=record_path)
        if output_path:
            _write_atomically(output_path, lambda handle: handle.write(estimates.model_dump_json(indent=2) + "\n"))
        return estimates

    def run_optimize(self, config_path: str, mode: OptimizationMode, output_path: Optional[str] = None) -> OptimizationResult:
        """Optimal density with its equivalent cell radius"""
        cfg, pm = parse_config_file(config_path)
        result = optimizer_service.optimize(cfg, pm, mode)
        if output_path:
            response = OptimizationResponse(result=result, cell_radius_m=result.cell_radius)
            _write_atomically(output_path, lambda handle: handle.write(response.model_dump_json(indent=2) + "\n"))
        return result

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    @staticmethod
    def compare(analytic: AnalysisResult, simulated: MetricEstimates, seed: int) -> ValidationReport:
        """Analytic values against simulated 95% CIs widened by 10% of the MC mean"""
        rows = []
        for metric in VALIDATION_METRICS:
            value = float(getattr(analytic, metric))
            estimate = getattr(simulated, metric)
            margin = VALIDATION_MARGIN * abs(estimate.mean)
            low, high = estimate.ci_low - margin, estimate.ci_high + margin
            rows.append(ValidationRow(
                metric=metric,
                analytic=value,
                mc_mean=estimate.mean,
                ci_low=estimate.ci_low,
                ci_high=estimate.ci_high,
                tolerance_low=low,
                tolerance_high=high,
                passed=low <= value <= high,
            ))

        trials = simulated.ee.trials
        warnings = []
        if trials < PRECISION_WARNING_TRIALS:
            warnings.append(
                f"insufficient precision: {trials} snapshots is below the recommended {PRECISION_WARNING_TRIALS}"
            )
        return ValidationReport(trials=trials, seed=seed, rows=rows, warnings=warnings)

    def run_validate(
        self,
        config_path: str,
        trials: int,
        seed: int,
        output_path: Optional[str] = None,
        workers: Optional[int] = None,
        quad_order: Optional[int] = None,
    ) -> ValidationReport:
        cfg, pm = parse_config_file(config_path)
        analytic = _analytic_point((cfg, pm, quad_order or self.quad_order))
        simulated = estimate_metrics(cfg, pm, trials, seed, workers=workers or self.workers)
        report = self.compare(analytic, simulated, seed)

        for warning in report.warnings:
            logger.warning(warning)
        if report.passed:
            logger.info(f"Validation passed for all {len(report.rows)} metrics")
        else:
            logger.error(f"Validation failed for: {', '.join(report.failed_metrics)}")

        if output_path:
            _write_atomically(output_path, lambda handle: handle.write(report.model_dump_json(indent=2) + "\n"))
        return report


sweep_service = SweepService()
