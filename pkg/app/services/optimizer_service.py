"""
BS-density optimization of the network energy efficiency.

The objective is the order-1 Laguerre form of the EE: one quadrature node at
r = 1 (in units of d0), weight 1. Densities inside the objective are
normalized, x = lambda * d0^2; results are converted back to per m^2.

The radar miss term is g(x) = e b4 x e^(-b4 x) Q(N, b3 / x): the nearest-BS
density at the node, scaled to a unit peak, times the miss probability of a
target at the node's slant range. b3 carries the echo strength, so raising
the target shrinks b3 and pulls the optimum towards sparser networks.
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.core.errors import ConvergenceError, NoSolutionError, ParameterError
from app.schemas.network import NetworkConfig, PowerModel
from app.schemas.optimization import (
    ObjectiveCoefficients,
    OptimizationMethod,
    OptimizationMode,
    OptimizationResult,
)
from app.services.analytic_service import analytic_service
from app.services.common.numerics import (
    cubic_residual,
    solve_cubic,
    upper_incomplete_gamma,
)

logger = logging.getLogger(__name__)

FD_STEP = 1e-4
MAXIMUM_CHECK_STEP = 0.01
FALLBACK_GRID_POINTS = 400
SCAN_POINTS = 65
UNIMODAL_FLAT_TOL = 1e-12


class OptimizerService:
    def __init__(self) -> None:
        self.tol = settings.NEWTON_TOL
        self.max_iter = settings.NEWTON_MAX_ITER
        self.bracket = settings.lambda_bracket

    # ------------------------------------------------------------------
    # Objective
    # ------------------------------------------------------------------

    def objective_coefficients(self, cfg: NetworkConfig, pm: PowerModel) -> ObjectiveCoefficients:
        """Coefficients a1, a2_k, a3, b1_i..b5 of the order-1 objective"""
        r1, h1 = 1.0, 1.0
        e_r1 = math.e ** r1

        offset = cfg.height_offset / cfg.d0
        distance = math.sqrt(r1 * r1 + offset * offset)
        budget = cfg.beta_int * (distance ** (-cfg.alpha) / cfg.gamma_c - cfg.noise_to_power)
        if budget <= 0:
            raise ParameterError(
                f"gamma_c = {cfg.gamma_c_db} dB is unreachable at the reference distance even without interference"
            )
        gamma_ratio = math.factorial(cfg.kappa - 1) / math.gamma(cfg.kappa)
        a2 = tuple(
            2.0 * math.pi * gamma_ratio
            * budget ** (-2.0 / cfg.alpha)
            * upper_incomplete_gamma((k + 2.0) / cfg.alpha, budget)
            / (cfg.alpha * math.factorial(k))
            + math.pi * r1 * r1 / cfg.kappa
            for k in range(cfg.kappa)
        )

        r_radar = 1.0
        offset = cfg.target_offset / cfg.d0 if cfg.shift_radar_nodes else 0.0
        target_range = math.sqrt(r_radar * r_radar + offset * offset)
        ref = cfg.r_ref / cfg.d0 if cfg.r_ref is not None else 1.0
        n_terms = cfg.n_tx
        # P cancels against the BS-to-BS interference; the echo keeps the per-antenna processing gain
        b3 = (
            (n_terms - 1) * (cfg.alpha - 2.0) * cfg.radar_shape * cfg.rcs * (cfg.radar_gain / cfg.n_tx)
            * target_range ** (-cfg.radar_exponent)
            / (2.0 * math.pi * cfg.beta_int * ref ** (2.0 - cfg.alpha) * cfg.gamma_r)
        )
        # nearest-BS density at the node, scaled to a unit peak over x
        b4 = math.pi * r_radar * r_radar
        peak = math.e * b4 * h1

        return ObjectiveCoefficients(
            a1=math.log2(1.0 + cfg.gamma_c) * 2.0 * math.pi * h1 * e_r1 * r1,
            a2=a2,
            a3=sum(a2),
            b1=tuple(peak / math.factorial(i) for i in range(n_terms)),
            b2=tuple((-b3) ** i for i in range(n_terms)),
            b3=b3,
            b4=b4,
            b5=math.log2(1.0 + cfg.gamma_r),
            n_terms=n_terms,
            power_per_bs_w=pm.per_bs_power_w,
            bandwidth_hz=cfg.bandwidth_hz,
            d0=cfg.d0,
        )

    @staticmethod
    def _radar_series(coef: ObjectiveCoefficients, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """g(x) = x e^-(b3/x + b4 x) sum_i b1_i (-1/x)^i b2_i and g'(x)"""
        exponent = np.exp(-(coef.b3 / x + coef.b4 * x))
        series = np.zeros_like(x)
        series_prime = np.zeros_like(x)
        for i, (b1, b2) in enumerate(zip(coef.b1, coef.b2)):
            c = b1 * b2 * (-1.0) ** i
            series = series + c * x ** (-i)
            series_prime = series_prime - i * c * x ** (-i - 1)
        g = x * exponent * series
        g_prime = exponent * series + x * exponent * (coef.b3 / x ** 2 - coef.b4) * series + x * exponent * series_prime
        return g, g_prime

    def objective(self, coef: ObjectiveCoefficients, x: Any, mode: OptimizationMode = OptimizationMode.ISAC) -> np.ndarray:
        """EE in bit/Joule at normalized densities x; the radar coverage term is clamped to [0, 1]"""
        x = np.asarray(x, dtype=float)
        value = np.zeros_like(x)
        if mode.includes_comm:
            value = value + coef.a1 * x * np.exp(-coef.a3 * x)
        if mode.includes_radar:
            g, _ = self._radar_series(coef, x)
            coverage = 1.0 - g
            clamped = np.clip(coverage, 0.0, 1.0)
            if np.any(clamped != coverage):
                logger.debug(f"Radar objective term clamped at {int(np.sum(clamped != coverage))} point(s)")
            value = value + coef.b5 * clamped
        return coef.bandwidth_hz * value / coef.power_per_bs_w

    def derivative(self, coef: ObjectiveCoefficients, x: Any, mode: OptimizationMode = OptimizationMode.ISAC) -> np.ndarray:
        """dEE/dx of the objective; zero where the radar term sits on a clamp"""
        x = np.asarray(x, dtype=float)
        value = np.zeros_like(x)
        if mode.includes_comm:
            value = value + coef.a1 * np.exp(-coef.a3 * x) * (1.0 - coef.a3 * x)
        if mode.includes_radar:
            g, g_prime = self._radar_series(coef, x)
            interior = (g > 0.0) & (g < 1.0)
            value = value - coef.b5 * np.where(interior, g_prime, 0.0)
        return coef.bandwidth_hz * value / coef.power_per_bs_w

    @staticmethod
    def published_radar_derivative(coef: ObjectiveCoefficients, x: float) -> float:
        """Literal transcription of the published radar-only derivative, used only as a cross-check"""
        n = coef.n_terms
        product = sum(b1 * b2 for b1, b2 in zip(coef.b1, coef.b2))
        decay = math.exp(-(coef.b3 / x + coef.b4 * x))
        power = (-1.0 / x) ** n
        bracket_term = 1.0 + power * x
        total = (
            -product * decay * x * bracket_term / (1.0 + x) ** 2
            + product * decay * bracket_term / (1.0 + x)
            + product * decay * x * bracket_term * (coef.b3 / x ** 2 - coef.b4) / (1.0 + x)
            + product * decay * x * (power + (-1.0 / x) ** (n - 1) * n / x) / (1.0 + x)
        )
        return coef.bandwidth_hz * coef.b5 * total / coef.power_per_bs_w

    # ------------------------------------------------------------------
    # Closed forms
    # ------------------------------------------------------------------

    def optimal_density_comm_only(self, coef: ObjectiveCoefficients) -> float:
        """x* = 1/a3 (normalized density)"""
        if coef.a3 <= 0:
            raise ParameterError(f"a3 must be positive, got {coef.a3}")
        x = 1.0 / coef.a3
        slope = coef.a1 * math.exp(-coef.a3 * x) * (1.0 - coef.a3 * x)
        if abs(slope) > 1e-10 * coef.a1:
            logger.warning(f"Communication derivative at 1/a3 is {slope:.3e}, expected 0")
        return x

    @staticmethod
    def radar_cubics(coef: ObjectiveCoefficients, n_tx: int) -> Dict[str, Tuple[float, float, float, float]]:
        """
        Cubic stationarity conditions of the radar-only objective, as
        (a3, a2, a1, a0) polynomial coefficients for the two density regimes.
        """
        b3, b4 = coef.b3, coef.b4
        return {
            "low_density": (b4, -(1.0 - n_tx - b4), -(1.0 - n_tx + b3 + 1.0), -b3),
            "high_density": (b4, b4, -(b3 + 1.0), -b3),
        }

    def solve_radar_cubics(
        self,
        coef: ObjectiveCoefficients,
        n_tx: int,
        bracket: Tuple[float, float],
    ) -> Dict[str, Any]:
        """Admissible roots of both cubic branches with their radar-only EE"""
        low, high = bracket
        metadata: Dict[str, Any] = {"branches": {}}
        candidates: List[Tuple[float, float, str]] = []
        for branch, coefficients in self.radar_cubics(coef, n_tx).items():
            entry: Dict[str, Any] = {"coefficients": list(coefficients), "roots": [], "admissible": []}
            if coefficients[0] == 0:
                entry["skipped"] = "vanishing cubic coefficient"
                metadata["branches"][branch] = entry
                continue
            roots = solve_cubic(*coefficients)
            entry["roots"] = roots
            entry["residuals"] = [cubic_residual(*coefficients, root) for root in roots]
            entry["companion_roots"] = solve_cubic(*coefficients, method="companion")
            for root in roots:
                if low <= root <= high:
                    ee = float(self.objective(coef, root, OptimizationMode.RADAR_ONLY))
                    entry["admissible"].append({"root": root, "ee": ee})
                    candidates.append((ee, root, branch))
            metadata["branches"][branch] = entry

        # the radar-only EE can peak on a bracket edge, which no cubic root marks
        if candidates:
            for edge in (low, high):
                ee = float(self.objective(coef, edge, OptimizationMode.RADAR_ONLY))
                candidates.append((ee, edge, "endpoint"))
            ee, root, branch = max(candidates, key=lambda item: (item[0], -item[1]))
            metadata["selected"] = {"root": root, "ee": ee, "branch": branch}
        return metadata

    def optimal_density_radar_only(
        self,
        coef: ObjectiveCoefficients,
        n_tx: int,
        bracket: Optional[Tuple[float, float]] = None,
        allow_grid_fallback: bool = True,
    ) -> float:
        """Best admissible cubic root (normalized density), falling back to a grid search"""
        bracket = bracket or self._normalized_bracket(coef, None)
        metadata = self.solve_radar_cubics(coef, n_tx, bracket)
        if "selected" in metadata:
            return metadata["selected"]["root"]
        if not allow_grid_fallback:
            raise NoSolutionError("Radar-only cubics have no real positive root inside the bracket")
        logger.warning("No admissible radar cubic root; falling back to grid search")
        return self._grid_argmax(coef, bracket, OptimizationMode.RADAR_ONLY)

    # ------------------------------------------------------------------
    # Grid search
    # ------------------------------------------------------------------

    def _normalized_bracket(self, coef: ObjectiveCoefficients, bracket: Optional[Tuple[float, float]]) -> Tuple[float, float]:
        low, high = bracket or self.bracket
        if not 0 < low < high:
            raise ParameterError(f"Density bracket must satisfy 0 < low < high, got {(low, high)}")
        return coef.to_normalized(low), coef.to_normalized(high)

    def _grid_argmax(self, coef: ObjectiveCoefficients, bracket: Tuple[float, float], mode: OptimizationMode) -> float:
        grid = np.geomspace(bracket[0], bracket[1], FALLBACK_GRID_POINTS)
        values = self.objective(coef, grid, mode)
        return float(grid[int(np.argmax(values))])

    @staticmethod
    def is_unimodal(values: Sequence[float]) -> bool:
        """At most one sign change (+ to -) in the successive differences; flat steps ignored"""
        values = np.asarray(values, dtype=float)
        if values.size < 3:
            return True
        diffs = np.diff(values)
        scale = max(float(np.max(np.abs(values))), 1e-300)
        signs = np.sign(diffs[np.abs(diffs) > UNIMODAL_FLAT_TOL * scale])
        changes = np.nonzero(signs[1:] != signs[:-1])[0]
        if changes.size == 0:
            return True
        return changes.size == 1 and signs[changes[0]] > 0

    def grid_search(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        grid: Sequence[float],
        mode: OptimizationMode = OptimizationMode.ISAC,
        objective: str = "closed_form",
    ) -> OptimizationResult:
        """
        Argmax of the EE over a sorted density grid (per m^2).

        ``closed_form`` evaluates the order-1 objective used by the Newton and
        closed-form solvers; ``analytic`` evaluates the full quadrature EE.
        """
        grid = np.asarray(grid, dtype=float)
        if grid.size == 0:
            raise ParameterError("Grid must not be empty")
        if np.any(grid <= 0) or np.any(np.diff(grid) < 0):
            raise ParameterError("Grid must hold positive, sorted densities")

        if objective == "closed_form":
            coef = self.objective_coefficients(cfg, pm)
            values = self.objective(coef, coef.to_normalized(grid), mode)
        elif objective == "analytic":
            values = np.array([
                analytic_service.energy_efficiency(
                    cfg.with_density(float(lam)),
                    pm,
                    include_comm=mode.includes_comm,
                    include_radar=mode.includes_radar,
                )
                for lam in grid
            ])
        else:
            raise ParameterError(f"Unknown grid objective '{objective}'")

        index = int(np.argmax(values))
        return OptimizationResult(
            lambda_star=float(grid[index]),
            ee_star=float(values[index]),
            method=OptimizationMethod.GRID,
            mode=mode,
            iterations=int(grid.size),
            converged=True,
            bracket=(float(grid[0]), float(grid[-1])),
            unimodal=self.is_unimodal(values),
            details={"index": index, "objective": objective},
        )

    # ------------------------------------------------------------------
    # Newton
    # ------------------------------------------------------------------

    def _scaled_residual(self, coef: ObjectiveCoefficients, x: float, slope: float, mode: OptimizationMode) -> float:
        """|dEE/dx| x / EE, a dimensionless stationarity measure"""
        value = float(self.objective(coef, x, mode))
        return abs(slope) * x / max(value, 1e-300)

    def _sign_change_bracket(
        self,
        coef: ObjectiveCoefficients,
        bracket: Tuple[float, float],
        mode: OptimizationMode,
    ) -> Optional[Tuple[float, float]]:
        """
        Sub-interval of a coarse log grid where dEE/dx turns from positive to
        non-positive; the one with the highest EE when there are several.
        """
        grid = np.geomspace(bracket[0], bracket[1], SCAN_POINTS)
        slopes = self.derivative(coef, grid, mode)
        crossings = np.nonzero((slopes[:-1] > 0) & (slopes[1:] <= 0))[0]
        if crossings.size == 0:
            return None
        values = self.objective(coef, np.sqrt(grid[crossings] * grid[crossings + 1]), mode)
        best = int(crossings[int(np.argmax(values))])
        return float(grid[best]), float(grid[best + 1])

    def _fallback(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        mode: OptimizationMode,
        bracket: Tuple[float, float],
        reason: str,
    ) -> OptimizationResult:
        logger.warning(f"Newton iteration abandoned ({reason}); using grid search")
        grid = np.geomspace(bracket[0], bracket[1], FALLBACK_GRID_POINTS)
        result = self.grid_search(cfg, pm, grid, mode)
        result.details["fallback_reason"] = reason
        return result

    def optimize_density_newton(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        lambda0: Optional[float] = None,
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
        mode: OptimizationMode = OptimizationMode.ISAC,
        bracket: Optional[Tuple[float, float]] = None,
        allow_grid_fallback: bool = True,
    ) -> OptimizationResult:
        """
        Safeguarded Newton iteration on dEE/dlambda = 0.

        f is the analytic derivative of the objective, f' a central difference
        with step 1e-4 x. The iteration runs inside a + to - sign change of f
        located on a coarse log scan; steps leaving that bracket are replaced
        by geometric bisection. Without a sign change the grid search is used.
        """
        tol = self.tol if tol is None else tol
        max_iter = self.max_iter if max_iter is None else max_iter
        physical_bracket = bracket or self.bracket
        coef = self.objective_coefficients(cfg, pm)
        outer_low, outer_high = self._normalized_bracket(coef, physical_bracket)
        if lambda0 is not None and not outer_low < coef.to_normalized(lambda0) < outer_high:
            raise ParameterError(f"lambda0={lambda0:g} must lie strictly inside the bracket {physical_bracket}")

        def f(value: float) -> float:
            return float(self.derivative(coef, value, mode))

        sub_bracket = self._sign_change_bracket(coef, (outer_low, outer_high), mode)
        if sub_bracket is None:
            reason = "dEE/dlambda has no + to - sign change inside the bracket"
            if allow_grid_fallback:
                return self._fallback(cfg, pm, mode, physical_bracket, reason)
            raise NoSolutionError(reason)
        low, high = sub_bracket

        x = coef.to_normalized(lambda0) if lambda0 is not None else 1.0 / coef.a3
        if not low < x < high:
            x = math.sqrt(low * high)

        residual = math.inf
        converged = False
        iterations = 0
        for iterations in range(1, max_iter + 1):
            fx = f(x)
            residual = self._scaled_residual(coef, x, fx, mode)
            logger.debug(f"Newton iterate {iterations}: x={x:.12e}, f={fx:.3e}, residual={residual:.3e}")
            if residual < tol:
                converged = True
                break
            if fx > 0:
                low = x
            else:
                high = x
            if high / low - 1.0 < 1e-14:
                converged = True
                logger.debug("Newton bracket collapsed to machine precision")
                break

            h = FD_STEP * x
            slope = (f(x + h) - f(x - h)) / (2.0 * h)
            candidate = x - fx / slope if slope < 0 and math.isfinite(slope) else math.nan
            if not low < candidate < high:
                candidate = math.sqrt(low * high)
            x = candidate

        if not converged:
            raise ConvergenceError(
                f"Newton iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
                last_iterate=coef.to_physical(x),
                residual=residual,
            )

        ee_star = float(self.objective(coef, x, mode))
        neighbours = self.objective(coef, np.array([x * (1 - MAXIMUM_CHECK_STEP), x * (1 + MAXIMUM_CHECK_STEP)]), mode)
        if ee_star < float(np.max(neighbours)):
            reason = f"stationary point at lambda={coef.to_physical(x):.4e} is not a maximum"
            if allow_grid_fallback:
                return self._fallback(cfg, pm, mode, physical_bracket, reason)
            raise NoSolutionError(reason)

        details: Dict[str, Any] = {"a3": coef.a3, "b3": coef.b3, "b4": coef.b4}
        if mode.includes_radar:
            exact = float(self.derivative(coef, x, OptimizationMode.RADAR_ONLY))
            published = self.published_radar_derivative(coef, x)
            discrepancy = abs(published - exact) / max(abs(exact), abs(published), 1e-300)
            details["radar_derivative_discrepancy"] = float(discrepancy)
            logger.info(f"Radar derivative cross-check at optimum: relative discrepancy {discrepancy:.3e}")

        result = OptimizationResult(
            lambda_star=coef.to_physical(x),
            ee_star=ee_star,
            method=OptimizationMethod.NEWTON,
            mode=mode,
            iterations=iterations,
            converged=True,
            bracket=tuple(physical_bracket),
            residual=residual,
            details=details,
        )
        logger.info(
            f"Newton optimum lambda*={result.lambda_star:.6e} /m^2 (radius {result.cell_radius:.2f} m), "
            f"EE={ee_star:.6e} bit/J after {iterations} iterations"
        )
        return result

    # ------------------------------------------------------------------
    # Dispatcher
    # ------------------------------------------------------------------

    def optimize(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        mode: OptimizationMode = OptimizationMode.ISAC,
        lambda0: Optional[float] = None,
        bracket: Optional[Tuple[float, float]] = None,
    ) -> OptimizationResult:
        """Optimal density for the requested network type"""
        physical_bracket = bracket or self.bracket
        if mode is OptimizationMode.ISAC:
            return self.optimize_density_newton(cfg, pm, lambda0=lambda0, bracket=physical_bracket)

        coef = self.objective_coefficients(cfg, pm)
        normalized = self._normalized_bracket(coef, physical_bracket)

        if mode is OptimizationMode.COMM_ONLY:
            x = self.optimal_density_comm_only(coef)
            if not normalized[0] <= x <= normalized[1]:
                return self._fallback(cfg, pm, mode, physical_bracket, "1/a3 lies outside the bracket")
            result = OptimizationResult(
                lambda_star=coef.to_physical(x),
                ee_star=float(self.objective(coef, x, mode)),
                method=OptimizationMethod.CLOSED_FORM_COMM,
                mode=mode,
                bracket=tuple(physical_bracket),
                residual=abs(1.0 - coef.a3 * x),
                details={"a1": coef.a1, "a3": coef.a3},
            )
        else:
            x = self.optimal_density_radar_only(coef, cfg.n_tx, normalized)
            metadata = self.solve_radar_cubics(coef, cfg.n_tx, normalized)
            method = OptimizationMethod.CLOSED_FORM_RADAR_CUBIC if "selected" in metadata else OptimizationMethod.GRID
            result = OptimizationResult(
                lambda_star=coef.to_physical(x),
                ee_star=float(self.objective(coef, x, mode)),
                method=method,
                mode=mode,
                bracket=tuple(physical_bracket),
                details={"b3": coef.b3, "b4": coef.b4, "cubic": metadata},
            )

        logger.info(
            f"{mode.value} optimum lambda*={result.lambda_star:.6e} /m^2 (radius {result.cell_radius:.2f} m) "
            f"via {result.method.value}"
        )
        return result


optimizer_service = OptimizerService()
