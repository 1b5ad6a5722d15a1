"""
Closed-form coverage, PSE and energy-efficiency evaluation.

Distances inside the closed forms are measured in units of the path-loss
reference distance d0 and densities are normalized to lambda * d0^2.
Interference values are normalized by the power received at d0:
I = sum_l (d_l / d0)^-alpha * Y_l with Y_l ~ Gamma(kappa, rate beta), and noise
enters as sigma^2 L(d0) / P. The default coverage laws integrate over the
same network disc the snapshot simulator draws.
"""
import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special

from app.config import settings
from app.core.errors import AccuracyError, DomainError, ParameterError
from app.schemas.analysis import (
    AnalysisResult,
    EulerInversionParams,
    QuadratureRule,
    RadialMapping,
)
from app.schemas.network import NetworkConfig, PowerModel
from app.services.common.numerics import (
    gauss_2f1,
    gauss_laguerre,
    upper_incomplete_gamma_array,
)
from app.utils.radio_utils import network_power_density

logger = logging.getLogger(__name__)

CLAMP_WARN_TOL = 1e-6
EULER_ACCURACY = 1e-6
GIL_PELAEZ_ACCURACY = 1e-5
DEFAULT_D_MIN = 50.0  # m, inner radius of the interference annulus
PGFL_NODES = 256
FADING_NODES = 8
RADAR_GAIN_SHAPE = 2  # echo-gain law shape, fitted together with mvdr_gain

MgfFunction = Callable[[np.ndarray], np.ndarray]


def _clamp_probability(value: float, label: str) -> float:
    if value < -CLAMP_WARN_TOL or value > 1.0 + CLAMP_WARN_TOL:
        logger.warning(f"{label} evaluated to {value:.3e} outside [0, 1]; quadrature may be under-resolved")
    return float(min(1.0, max(0.0, value)))


@lru_cache(maxsize=8)
def _legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _pgfl_integral(
    s: np.ndarray,
    u_lo: float,
    u_hi: float,
    alpha: float,
    kappa: int,
    beta: float,
) -> np.ndarray:
    """
    int_{u_lo}^{u_hi} 1 - (1 + s u^(-alpha/2) / beta)^-kappa du for every s, with u the
    squared distance in d0 units. A finite annulus is integrated in log u; an
    unbounded one through u = u_lo t^-q, q = 2/(alpha-2), which leaves a smooth
    integrand on (0, 1].
    """
    x, w = _legendre_rule(PGFL_NODES)
    if math.isinf(u_hi):
        q = 2.0 / (alpha - 2.0)
        t = 0.5 * (x + 1.0)
        u = u_lo * t ** (-q)
        weights = 0.5 * w * q * u_lo * t ** (-q - 1.0)
    else:
        v_lo, v_hi = math.log(u_lo), math.log(u_hi)
        u = np.exp(0.5 * (v_hi - v_lo) * x + 0.5 * (v_hi + v_lo))
        weights = 0.5 * (v_hi - v_lo) * w * u

    gain = u ** (-alpha / 2.0) / beta
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    integrand = -np.expm1(-kappa * np.log1p(s[:, None] * gain[None, :]))
    return integrand @ weights


def _alzer_terms(shape: int, scale: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pr(G > t) ~= sum_j c_j exp(-j eta t) for G ~ Gamma(shape, 1), eta = (shape!)^(-1/shape),
    exact for shape 1. Returns c_j and the (shape, n) arguments j eta scale.
    """
    j = np.arange(1, shape + 1)
    eta = math.factorial(shape) ** (-1.0 / shape)
    signs = (-1.0) ** (j + 1) * special.comb(shape, j)
    return signs, (j * eta)[:, None] * np.atleast_1d(np.asarray(scale, dtype=float))[None, :]


class AnalyticService:
    def __init__(self) -> None:
        self.quad_order = settings.QUAD_ORDER
        self.euler_params = EulerInversionParams(A=settings.EULER_A, N=settings.EULER_N, Q=settings.EULER_Q)
        self.mapping = RadialMapping.DENSITY

    def _rule(self, rule: Optional[QuadratureRule]) -> QuadratureRule:
        return rule if rule is not None else gauss_laguerre(self.quad_order)

    # ------------------------------------------------------------------
    # Interference distribution
    # ------------------------------------------------------------------

    @staticmethod
    def _annulus(cfg: NetworkConfig, d_min: float, r_max: Optional[float]) -> Tuple[float, float]:
        r_max = cfg.r_area if r_max is None else r_max
        if d_min <= 0:
            raise ParameterError(f"Inner interference radius must be positive, got {d_min}")
        if r_max <= d_min:
            raise ParameterError(f"Outer radius {r_max} must exceed inner radius {d_min}")
        return (d_min / cfg.d0) ** 2, (r_max / cfg.d0) ** 2

    def _mgf_callable(self, cfg: NetworkConfig, u_lo: float, u_hi: float) -> MgfFunction:
        density = cfg.normalized_density

        def mgf(s: np.ndarray) -> np.ndarray:
            return np.exp(-math.pi * density * _pgfl_integral(s, u_lo, u_hi, cfg.alpha, cfg.kappa, cfg.beta_int))

        return mgf

    def mgf_interference(
        self,
        s: Union[float, complex],
        cfg: NetworkConfig,
        d_min: float = DEFAULT_D_MIN,
        r_max: Optional[float] = None,
        method: str = "hypergeometric",
    ) -> Union[float, complex]:
        """
        E[exp(-s I)] for interferers of density lambda_b on the annulus [d_min, r_max]
        (metres; r_max defaults to R_A and may be inf).

        ``hypergeometric`` uses the closed form
        exp(-pi lambda (F(r^2) - F(d^2))), F(u) = u (1 - 2F1(kappa, -2/alpha; 1 - 2/alpha; -s u^(-alpha/2) / beta)),
        ``quadrature`` integrates the same PGFL exponent numerically.
        """
        if complex(s).real < 0:
            raise DomainError(f"MGF evaluated outside its convergence region, Re(s) = {complex(s).real}")
        u_lo, u_hi = self._annulus(cfg, d_min, r_max)
        density = cfg.normalized_density
        is_complex = isinstance(s, complex) and s.imag != 0.0
        if density == 0 or s == 0:
            return complex(1.0) if is_complex else 1.0

        if method == "quadrature":
            value = self._mgf_callable(cfg, u_lo, u_hi)(np.array([s]))[0]
        elif method == "hypergeometric":
            a, b, c = float(cfg.kappa), -2.0 / cfg.alpha, 1.0 - 2.0 / cfg.alpha

            def antiderivative(u: float) -> Union[float, complex]:
                if math.isinf(u):
                    return 0.0
                return u * (1.0 - gauss_2f1(a, b, c, -s * u ** (-cfg.alpha / 2.0) / cfg.beta_int))

            value = np.exp(-math.pi * density * (antiderivative(u_hi) - antiderivative(u_lo)))
        else:
            raise ParameterError(f"Unknown MGF method '{method}'")

        return complex(value) if is_complex else float(np.real(value))

    def mean_interference(self, cfg: NetworkConfig, d_min: float = DEFAULT_D_MIN, r_max: Optional[float] = None) -> float:
        """E[I] = pi lambda (kappa / beta) int u^(-alpha/2) du over the annulus"""
        u_lo, u_hi = self._annulus(cfg, d_min, r_max)
        exponent = 1.0 - cfg.alpha / 2.0
        upper = 0.0 if math.isinf(u_hi) else u_hi ** exponent
        return math.pi * cfg.normalized_density * cfg.kappa / cfg.beta_int * (upper - u_lo ** exponent) / exponent

    @staticmethod
    def _euler_sum(x: float, mgf: MgfFunction, params: EulerInversionParams) -> Tuple[float, float]:
        """Binomially averaged Euler series for the CDF; returns (value, error estimate)"""
        n = np.arange(params.N + params.Q + 2)
        s = (params.A + 2j * math.pi * n) / (2.0 * x)
        transform = mgf(s) / s
        terms = (-1.0) ** n * np.real(transform)
        terms[0] *= 0.5
        partial = np.cumsum(terms)
        binomial = special.comb(params.Q, np.arange(params.Q + 1)) / 2.0 ** params.Q
        scale = math.exp(params.A / 2.0) / x
        estimate = scale * float(binomial @ partial[params.N:params.N + params.Q + 1])
        next_estimate = scale * float(binomial @ partial[params.N + 1:params.N + params.Q + 2])
        discretization = math.exp(-params.A) / (1.0 - math.exp(-params.A))
        return estimate, abs(next_estimate - estimate) + discretization

    def cdf_interference_euler(
        self,
        x: float,
        cfg: NetworkConfig,
        params: Optional[EulerInversionParams] = None,
        d_min: float = DEFAULT_D_MIN,
        r_max: Optional[float] = None,
        mgf_method: str = "quadrature",
    ) -> float:
        """Pr(I <= x) by Euler-series inversion of the Laplace transform M(s)/s"""
        if x <= 0:
            raise ParameterError(f"CDF argument must be positive, got {x}")
        params = params or self.euler_params
        u_lo, u_hi = self._annulus(cfg, d_min, r_max)
        if cfg.normalized_density == 0:
            return 1.0

        if mgf_method == "quadrature":
            mgf = self._mgf_callable(cfg, u_lo, u_hi)
        else:
            def mgf(s: np.ndarray) -> np.ndarray:
                return np.array([self.mgf_interference(complex(v), cfg, d_min, r_max, method=mgf_method) for v in s])

        value, error = self._euler_sum(x, mgf, params)
        if error > EULER_ACCURACY:
            raise AccuracyError(
                f"Euler inversion remainder {error:.2e} exceeds {EULER_ACCURACY:g} at x={x:g}; raise A, N or Q",
                estimate=error,
            )
        return _clamp_probability(value, "interference CDF (Euler)")

    def cdf_interference_gilpelaez(
        self,
        x: float,
        cfg: NetworkConfig,
        d_min: float = DEFAULT_D_MIN,
        r_max: Optional[float] = None,
    ) -> float:
        """
        Pr(I <= x) from the characteristic function phi(t) = M(-it).

        The void-probability atom p0 at I = 0 is split off so the remaining
        oscillatory integral has a decaying integrand:
        F(x) = p0 + (1 - p0)/2 - (1/pi) int_0^inf Im[e^(-itx) (phi(t) - p0)] / t dt.
        """
        if x <= 0:
            raise ParameterError(f"CDF argument must be positive, got {x}")
        u_lo, u_hi = self._annulus(cfg, d_min, r_max)
        density = cfg.normalized_density
        if density == 0:
            return 1.0

        p0 = 0.0 if math.isinf(u_hi) else math.exp(-math.pi * density * (u_hi - u_lo))
        mgf = self._mgf_callable(cfg, u_lo, u_hi)

        def residual_cf(t: float) -> complex:
            return complex(mgf(np.array([-1j * t]))[0]) - p0

        def head(t: float) -> float:
            if t == 0:
                return 0.0
            return float((np.exp(-1j * t * x) * residual_cf(t)).imag / t)

        split = math.pi / x
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            head_value, head_err = integrate.quad(head, 0.0, split, limit=200)
            cos_value, cos_err = integrate.quad(
                lambda t: residual_cf(t).imag / t, split, np.inf, weight="cos", wvar=x, limlst=100
            )
            sin_value, sin_err = integrate.quad(
                lambda t: residual_cf(t).real / t, split, np.inf, weight="sin", wvar=x, limlst=100
            )
        for warning in caught:
            logger.debug(f"Gil-Pelaez quadrature: {warning.message}")

        error = (head_err + cos_err + sin_err) / math.pi
        if error > GIL_PELAEZ_ACCURACY:
            raise AccuracyError(f"Gil-Pelaez quadrature error {error:.2e} at x={x:g}", estimate=error)

        integral = head_value + cos_value - sin_value
        value = p0 + 0.5 * (1.0 - p0) - integral / math.pi
        return _clamp_probability(value, "interference CDF (Gil-Pelaez)")

    # ------------------------------------------------------------------
    # Communication coverage
    # ------------------------------------------------------------------

    @staticmethod
    def _comm_log_conditional(cfg: NetworkConfig, r: np.ndarray) -> np.ndarray:
        """
        log of the per-distance coverage term exp(-sum_k c_k(r)) for planar serving
        distances r (d0 units); -inf where the noise alone exceeds the budget.
        """
        density = cfg.normalized_density
        distance = np.sqrt(r ** 2 + (cfg.height_offset / cfg.d0) ** 2)
        budget = distance ** (-cfg.alpha) / cfg.gamma_c - cfg.noise_to_power
        log_cov = np.full(r.shape, -np.inf)
        feasible = budget > 0
        if not np.any(feasible):
            return log_cov

        y = cfg.beta_int * budget[feasible]
        prefactor = 2.0 * math.pi * density * math.factorial(cfg.kappa - 1) / math.gamma(cfg.kappa)
        exponent = np.zeros_like(y)
        for k in range(cfg.kappa):
            shape = (k + 2.0) / cfg.alpha
            exponent += (
                prefactor / (cfg.alpha * math.factorial(k))
                * y ** (-2.0 / cfg.alpha)
                * upper_incomplete_gamma_array(shape, y)
            )
        log_cov[feasible] = -exponent
        return log_cov

    @staticmethod
    def _conditioned_nodes(nodes: np.ndarray, limit: float, shape: int = 1) -> Tuple[np.ndarray, float]:
        """
        Map Laguerre nodes (an Exp(1) law) through the quantile of Gamma(shape, 1)
        truncated to [0, limit]. Returns the mapped nodes and the untruncated mass
        Pr(u <= limit).
        """
        mass = float(special.gammainc(shape, limit))
        u = special.gammaincinv(shape, -np.expm1(-nodes) * mass)
        return u, mass

    @staticmethod
    def _outer_sq(cfg: NetworkConfig) -> float:
        """Squared network radius in d0 units"""
        return (cfg.network_radius / cfg.d0) ** 2

    def coverage_prob_comm(
        self,
        cfg: NetworkConfig,
        rule: Optional[QuadratureRule] = None,
        mapping: Optional[RadialMapping] = None,
    ) -> float:
        """
        Coverage Pr(SINR > gamma_c) of the typical user.

        ``DENSITY`` averages the Laplace-transform form over the serving distance,
        conditioned on a BS inside the network disc; the ZF gain
        Gamma(N_t - kappa + 1, 1) enters through the Alzer series. ``SCALED``
        keeps the dominant-interferer form on unit-scaled nodes.
        """
        rule = self._rule(rule)
        mapping = mapping or self.mapping
        density = cfg.normalized_density
        if density == 0:
            return 0.0

        nodes = np.asarray(rule.nodes)
        weights = np.asarray(rule.weights)
        if mapping is RadialMapping.SCALED:
            r = nodes
            log_terms = (
                math.log(2.0 * math.pi * density) + np.log(r) + r
                - math.pi * density * r ** 2
                + self._comm_log_conditional(cfg, r)
            )
            return _clamp_probability(float(weights @ np.exp(log_terms)), "communication coverage")

        outer_sq = self._outer_sq(cfg)
        offset_sq = (cfg.height_offset / cfg.d0) ** 2
        u, _ = self._conditioned_nodes(nodes, math.pi * density * outer_sq)
        distance_sq = u / (math.pi * density) + offset_sq

        shape = cfg.n_tx - cfg.kappa + 1
        signs, s = _alzer_terms(shape, cfg.gamma_c * distance_sq ** (cfg.alpha / 2.0))
        conditional = np.empty_like(distance_sq)
        for i, d_sq in enumerate(distance_sq):
            exponent = np.real(_pgfl_integral(s[:, i], d_sq, outer_sq + offset_sq, cfg.alpha, cfg.kappa, cfg.beta_int))
            conditional[i] = signs @ np.exp(-s[:, i] * cfg.noise_to_power - math.pi * density * exponent)
        return _clamp_probability(float(weights @ conditional), "communication coverage")

    def coverage_prob_comm_exact(
        self,
        cfg: NetworkConfig,
        rule: Optional[QuadratureRule] = None,
        params: Optional[EulerInversionParams] = None,
        fading_nodes: int = FADING_NODES,
    ) -> float:
        """
        Coverage through the full interference CDF, for validation only:
        E_r E_g [ F_I(D(r)^-alpha g / gamma_c - sigma^2/P) ] with interferers beyond the
        serving distance and the ZF gain g ~ Gamma(N_t - kappa + 1, 1).
        """
        rule = self._rule(rule)
        params = params or self.euler_params
        density = cfg.normalized_density
        if density == 0:
            return 0.0

        shape = cfg.n_tx - cfg.kappa + 1
        gain_nodes, gain_weights = special.roots_genlaguerre(fading_nodes, shape - 1)
        gain_weights = gain_weights / math.gamma(shape)

        total = 0.0
        for node, weight in zip(rule.nodes, rule.weights):
            r = math.sqrt(node / (math.pi * density))
            distance_sq = r * r + (cfg.height_offset / cfg.d0) ** 2
            mgf = self._mgf_callable(cfg, distance_sq, math.inf)
            conditional = 0.0
            for gain, gain_weight in zip(gain_nodes, gain_weights):
                budget = distance_sq ** (-cfg.alpha / 2.0) * gain / cfg.gamma_c - cfg.noise_to_power
                if budget <= 0:
                    continue
                value, error = self._euler_sum(budget, mgf, params)
                if error > EULER_ACCURACY:
                    raise AccuracyError(f"Euler inversion remainder {error:.2e} in exact coverage", estimate=error)
                conditional += gain_weight * min(1.0, max(0.0, value))
            total += weight * conditional
        return _clamp_probability(total, "exact communication coverage")

    def pse_comm(
        self,
        cfg: NetworkConfig,
        rule: Optional[QuadratureRule] = None,
        mapping: Optional[RadialMapping] = None,
    ) -> float:
        """lambda_b log2(1 + gamma_c) Pr(cov) in bit/s/Hz/m^2"""
        if cfg.lambda_b == 0:
            return 0.0
        return cfg.lambda_b * math.log2(1.0 + cfg.gamma_c) * self.coverage_prob_comm(cfg, rule, mapping)

    # ------------------------------------------------------------------
    # Radar coverage
    # ------------------------------------------------------------------

    @staticmethod
    def _radar_miss(cfg: NetworkConfig, r: np.ndarray) -> np.ndarray:
        """
        Conditional miss probability e^-b sum_{i<N} (-b)^i / i! at target distances r
        (d0 units), clamped node-wise to [0, 1].
        """
        n_terms = cfg.n_tx
        ref = cfg.reference_radius / cfg.d0
        scale = (
            (n_terms - 1) * (cfg.alpha - 2.0) * cfg.radar_shape * cfg.p_tx_w * cfg.rcs
            / (2.0 * math.pi * cfg.normalized_density * cfg.beta_int * ref ** (2.0 - cfg.alpha) * cfg.gamma_r)
        )
        b = scale * r ** (-cfg.radar_exponent)
        miss = np.zeros_like(b)
        positive = b > 0
        miss[~positive] = 1.0
        log_b = np.log(b[positive])
        for i in range(n_terms):
            miss[positive] += (-1.0) ** i * np.exp(-b[positive] + i * log_b - math.lgamma(i + 1))
        clipped = np.clip(miss, 0.0, 1.0)
        if logger.isEnabledFor(logging.DEBUG) and np.any(clipped != miss):
            logger.debug(f"Radar miss clamped at {int(np.sum(clipped != miss))} node(s)")
        return clipped

    def coverage_prob_radar(
        self,
        cfg: NetworkConfig,
        rule: Optional[QuadratureRule] = None,
        mapping: Optional[RadialMapping] = None,
    ) -> float:
        """
        Detection probability Pr(SINR_r > gamma_r) of the typical target.

        ``DENSITY`` models the echo gain as Gamma(2, mean radar_gain); the
        receive array nulls the (N_r - 1) // kappa nearest interfering BSs and
        the rest form a PPP beyond the last nulled one. The target sits
        |h_bs - h_t| above the serving BS plane when ``shift_radar_nodes`` is set.
        ``SCALED`` keeps the series miss probability on altitude-shifted nodes.
        """
        rule = self._rule(rule)
        mapping = mapping or self.mapping
        density = cfg.normalized_density
        if density == 0:
            return 0.0

        nodes = np.asarray(rule.nodes)
        weights = np.asarray(rule.weights)
        if mapping is RadialMapping.SCALED:
            h = cfg.h_t / cfg.d0
            r = h + nodes if cfg.shift_radar_nodes else nodes
            log_density = (
                math.log(4.0 * math.pi * density) + np.log(r)
                - 2.0 * math.pi * density * (r ** 2 - h * h)
                + nodes
            )
            raw = 1.0 - float(weights @ (np.exp(log_density) * self._radar_miss(cfg, r)))
            return _clamp_probability(raw, "radar coverage")

        outer_sq = self._outer_sq(cfg)
        limit = math.pi * density * outer_sq
        offset_sq = (cfg.target_offset / cfg.d0) ** 2 if cfg.shift_radar_nodes else 0.0
        u, _ = self._conditioned_nodes(nodes, limit)
        echo = cfg.rcs * (u / (math.pi * density) + offset_sq) ** (-cfg.radar_exponent / 2.0)
        signs, s = _alzer_terms(RADAR_GAIN_SHAPE, RADAR_GAIN_SHAPE * cfg.gamma_r / (cfg.radar_gain * echo))

        nulled = (cfg.n_rx - 1) // cfg.kappa
        rho, mass = self._conditioned_nodes(nodes, limit, nulled)
        flat = s.ravel()
        residual = np.zeros_like(flat)
        for weight, rho_sq in zip(weights, rho / (math.pi * density)):
            exponent = np.real(_pgfl_integral(flat, rho_sq, outer_sq, cfg.alpha, cfg.kappa, cfg.beta_int))
            residual += weight * np.exp(-math.pi * density * exponent)
        # fewer than `nulled` interferers in the disc leaves no interference at all
        laplace = (mass * residual + (1.0 - mass)).reshape(s.shape)
        conditional = signs @ (np.exp(-s * cfg.noise_to_power) * laplace)
        return _clamp_probability(float(weights @ conditional), "radar coverage")

    def pse_radar(
        self,
        cfg: NetworkConfig,
        rule: Optional[QuadratureRule] = None,
        mapping: Optional[RadialMapping] = None,
    ) -> float:
        """lambda_b log2(1 + gamma_r) Pr(det) in bit/s/Hz/m^2"""
        if cfg.lambda_b == 0:
            return 0.0
        return cfg.lambda_b * math.log2(1.0 + cfg.gamma_r) * self.coverage_prob_radar(cfg, rule, mapping)

    # ------------------------------------------------------------------
    # Energy efficiency
    # ------------------------------------------------------------------

    def energy_efficiency(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        rule: Optional[QuadratureRule] = None,
        include_comm: bool = True,
        include_radar: bool = True,
        mapping: Optional[RadialMapping] = None,
    ) -> float:
        """EE = bandwidth (PSE_c + PSE_r) / P_T in bit/Joule"""
        if cfg.lambda_b <= 0:
            raise ParameterError("Energy efficiency is undefined for an empty network (lambda_b = 0)")
        rate = 0.0
        if include_comm:
            rate += self.pse_comm(cfg, rule, mapping)
        if include_radar:
            rate += self.pse_radar(cfg, rule, mapping)
        return cfg.bandwidth_hz * rate / network_power_density(cfg, pm)

    def analyze(
        self,
        cfg: NetworkConfig,
        pm: PowerModel,
        rule: Optional[QuadratureRule] = None,
        mapping: Optional[RadialMapping] = None,
    ) -> AnalysisResult:
        """Coverage, PSE and EE breakdown of one configuration"""
        rule = self._rule(rule)
        mapping = mapping or self.mapping
        if cfg.lambda_b <= 0:
            raise ParameterError("Analysis needs a positive BS density")

        coverage_comm = self.coverage_prob_comm(cfg, rule, mapping)
        coverage_radar = self.coverage_prob_radar(cfg, rule, mapping)
        rate_comm = cfg.bandwidth_hz * cfg.lambda_b * math.log2(1.0 + cfg.gamma_c) * coverage_comm
        rate_radar = cfg.bandwidth_hz * cfg.lambda_b * math.log2(1.0 + cfg.gamma_r) * coverage_radar
        power_density = network_power_density(cfg, pm)

        result = AnalysisResult(
            lambda_b=cfg.lambda_b,
            coverage_comm=coverage_comm,
            coverage_radar=coverage_radar,
            pse_comm=rate_comm,
            pse_radar=rate_radar,
            ee=(rate_comm + rate_radar) / power_density,
            ee_comm=rate_comm / power_density,
            ee_radar=rate_radar / power_density,
            power_density_w_m2=power_density,
            quad_order=rule.order,
            mapping=mapping,
        )
        logger.debug(f"Analysis at lambda_b={cfg.lambda_b:.3e}: EE={result.ee:.4e} bit/J")
        return result


analytic_service = AnalyticService()
