"""
Snapshot simulator: typical-user communication SINR, typical-target radar SINR
and aggregated metric estimates with 95% confidence intervals.

Every snapshot draws from its own counter-based stream keyed by
(seed, snapshot index), so estimates do not depend on the worker count.
Received powers are expressed relative to P / L(d0), the power received at
d0, so the noise term is sigma^2 L(d0) / P.
"""
import csv
import logging
import math
from multiprocessing import Pool
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from app.config import settings
from app.core.errors import NumericalError, ParameterError
from app.schemas.network import NetworkConfig, PowerModel
from app.schemas.simulation import MetricEstimates, Scene, SnapshotEstimate
from app.services.montecarlo.beamforming import (
    mvdr_filter,
    output_power,
    rayleigh_channel,
    steering_vector,
    zf_precoder,
)
from app.services.montecarlo.geometry import RngLike, as_generator, build_scene, snapshot_rng
from app.utils.radio_utils import network_power_density

logger = logging.getLogger(__name__)

Z_95 = 1.959963984540054
MAX_CHANNEL_DRAWS = 20
RECORD_HEADER = ["snapshot_id", "sinr_comm", "sinr_radar"]


def _draw_precoders(rng: np.random.Generator, count: int, kappa: int, n_tx: int) -> Tuple[np.ndarray, np.ndarray]:
    """ZF precoders for ``count`` BSs, redrawing channels that come out singular"""
    for _ in range(MAX_CHANNEL_DRAWS):
        try:
            return zf_precoder(rayleigh_channel(rng, count, kappa, n_tx))
        except NumericalError:
            logger.debug("Singular downlink channel drawn; resampling")
    raise NumericalError(f"No well-conditioned channel in {MAX_CHANNEL_DRAWS} draws")


def _serving_index(scene: Scene) -> Tuple[int, float]:
    planar = np.linalg.norm(scene.bs_positions, axis=1)
    index = int(np.argmin(planar))
    return index, float(planar[index])


def comm_sinr(cfg: NetworkConfig, rng: np.random.Generator, full_scene: bool = False) -> Tuple[float, Scene]:
    scene = build_scene(cfg, rng, full=full_scene)
    serving, r = _serving_index(scene)
    offset_sq = cfg.height_offset ** 2

    _, varsigma = _draw_precoders(rng, 1, cfg.kappa, cfg.n_tx)
    distance = math.sqrt(r * r + offset_sq) / cfg.d0
    signal = distance ** (-cfg.alpha) * float(varsigma[0, 0])

    others = np.delete(scene.bs_positions, serving, axis=0)
    interference = 0.0
    if others.shape[0]:
        d = np.sqrt(np.sum(others ** 2, axis=1) + offset_sq) / cfg.d0
        power_gain = rng.gamma(cfg.kappa, 1.0 / cfg.beta_int, size=others.shape[0])
        interference = float(np.sum(d ** (-cfg.alpha) * power_gain))
    return signal / (interference + cfg.noise_to_power), scene


def radar_sinr(cfg: NetworkConfig, rng: np.random.Generator, full_scene: bool = False) -> Tuple[float, Scene]:
    scene = build_scene(cfg, rng, full=full_scene)
    serving, r_t = _serving_index(scene)
    bs = scene.bs_positions[serving]

    # DOA of the target seen from the serving BS, folded into the ULA's [-pi/2, pi/2]
    azimuth = math.atan2(-bs[1], -bs[0])
    theta = math.asin(max(-1.0, min(1.0, math.sin(azimuth))))
    rx_steering = steering_vector(theta, cfg.n_rx)
    tx_steering = steering_vector(theta, cfg.n_tx)

    precoders, _ = _draw_precoders(rng, scene.bs_count, cfg.kappa, cfg.n_tx)
    if cfg.matched_radar_beam:
        tx_gain = float(cfg.n_tx)
    else:
        tx_gain = float(np.sum(np.abs(tx_steering @ precoders[serving]) ** 2))

    d_t = math.sqrt(r_t * r_t + cfg.target_offset ** 2) / cfg.d0
    signal = cfg.rcs * d_t ** (-cfg.radar_exponent) * tx_gain

    covariance = cfg.noise_to_power * np.eye(cfg.n_rx, dtype=complex)
    interferers = [l for l in range(scene.bs_count) if l != serving]
    if interferers:
        separation = np.linalg.norm(scene.bs_positions[interferers] - bs, axis=1) / cfg.d0
        cross = rayleigh_channel(rng, len(interferers), cfg.n_rx, cfg.n_tx)
        z = cross @ precoders[interferers]
        path_gain = separation ** (-cfg.alpha)
        covariance = covariance + np.einsum("l,lik,ljk->ij", path_gain, z, z.conj())

    weights = mvdr_filter(covariance, rx_steering)
    response = abs(np.vdot(weights, rx_steering)) ** 2
    return signal * response / output_power(weights, covariance), scene


def run_comm_snapshot(cfg: NetworkConfig, rng_seed: RngLike, full_scene: bool = True) -> Tuple[float, Scene]:
    """Communication SINR of the typical user for one snapshot"""
    return comm_sinr(cfg, as_generator(rng_seed), full_scene)


def run_radar_snapshot(cfg: NetworkConfig, rng_seed: RngLike, full_scene: bool = True) -> Tuple[float, Scene]:
    """MVDR output SINR of the typical target for one snapshot"""
    return radar_sinr(cfg, as_generator(rng_seed), full_scene)


def _simulate_chunk(args: Tuple[NetworkConfig, int, int, int]) -> np.ndarray:
    cfg, seed, start, stop = args
    out = np.empty((stop - start, 2))
    for row, index in enumerate(range(start, stop)):
        rng = snapshot_rng(seed, index)
        out[row, 0], _ = comm_sinr(cfg, rng)
        out[row, 1], _ = radar_sinr(cfg, rng)
    return out


def simulate_sinr(
    cfg: NetworkConfig,
    trials: int,
    rng_seed: int,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> np.ndarray:
    """(trials, 2) array of [comm SINR, radar SINR] in snapshot order"""
    workers = workers or settings.MC_WORKERS
    chunk_size = chunk_size or settings.MC_CHUNK_SIZE
    tasks = [(cfg, rng_seed, start, min(start + chunk_size, trials)) for start in range(0, trials, chunk_size)]

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            chunks = pool.map(_simulate_chunk, tasks)
    else:
        chunks = [_simulate_chunk(task) for task in tasks]
    return np.vstack(chunks)


def summarize(outcomes: np.ndarray, seed: int) -> SnapshotEstimate:
    """Sample mean with a 95% normal-approximation interval"""
    trials = int(outcomes.shape[0])
    mean = float(np.mean(outcomes))
    half_width = Z_95 * float(np.std(outcomes, ddof=1)) / math.sqrt(trials) if trials > 1 else 0.0
    return SnapshotEstimate(mean=mean, ci_low=mean - half_width, ci_high=mean + half_width, trials=trials, seed=seed)


def write_snapshot_records(path: str, sinr: np.ndarray) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RECORD_HEADER)
        for index, (sinr_comm, sinr_radar) in enumerate(sinr):
            writer.writerow([index, repr(float(sinr_comm)), repr(float(sinr_radar))])


def estimate_metrics(
    cfg: NetworkConfig,
    pm: PowerModel,
    trials: int,
    rng_seed: int,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    record_path: Optional[str] = None,
) -> MetricEstimates:
    """Monte Carlo coverage, PSE (bit/s/m^2) and EE (bit/J) with 95% CIs"""
    if trials < 100:
        raise ParameterError(f"At least 100 snapshots are required, got {trials}")

    logger.info(f"Simulating {trials} snapshots (seed={rng_seed}, lambda_b={cfg.lambda_b:.3e})")
    sinr = simulate_sinr(cfg, trials, rng_seed, workers, chunk_size)
    if record_path:
        write_snapshot_records(record_path, sinr)

    covered_comm = (sinr[:, 0] > cfg.gamma_c).astype(float)
    covered_radar = (sinr[:, 1] > cfg.gamma_r).astype(float)
    rate_comm = cfg.bandwidth_hz * cfg.lambda_b * math.log2(1.0 + cfg.gamma_c) * covered_comm
    rate_radar = cfg.bandwidth_hz * cfg.lambda_b * math.log2(1.0 + cfg.gamma_r) * covered_radar
    efficiency = (rate_comm + rate_radar) / network_power_density(cfg, pm)

    estimates = MetricEstimates(
        coverage_comm=summarize(covered_comm, rng_seed),
        coverage_radar=summarize(covered_radar, rng_seed),
        pse_comm=summarize(rate_comm, rng_seed),
        pse_radar=summarize(rate_radar, rng_seed),
        ee=summarize(efficiency, rng_seed),
    )
    logger.info(
        f"Simulation done: coverage_comm={estimates.coverage_comm.mean:.4f}, "
        f"coverage_radar={estimates.coverage_radar.mean:.4f}, ee={estimates.ee.mean:.4e} bit/J"
    )
    return estimates


def sample_interference(
    cfg: NetworkConfig,
    samples: int,
    rng_seed: int,
    d_min: float,
    r_max: Optional[float] = None,
) -> np.ndarray:
    """
    Draws of the normalized interference sum_l (d_l/d0)^-alpha Y_l from a PPP of
    density lambda_b on the annulus [d_min, r_max] with Y_l ~ Gamma(kappa, rate beta).
    """
    r_max = cfg.r_area if r_max is None else r_max
    if not 0 < d_min < r_max:
        raise ParameterError(f"Annulus needs 0 < d_min < r_max, got {d_min}, {r_max}")
    rng = snapshot_rng(rng_seed, 0)
    counts = rng.poisson(cfg.lambda_b * math.pi * (r_max ** 2 - d_min ** 2), size=samples)
    total = int(counts.sum())
    radius = np.sqrt(d_min ** 2 + rng.random(total) * (r_max ** 2 - d_min ** 2)) / cfg.d0
    marks = rng.gamma(cfg.kappa, 1.0 / cfg.beta_int, size=total)
    owner = np.repeat(np.arange(samples), counts)
    return np.bincount(owner, weights=radius ** (-cfg.alpha) * marks, minlength=samples)


def estimate_interference_mgf(
    cfg: NetworkConfig,
    s: float,
    samples: int,
    rng_seed: int,
    d_min: float,
    r_max: Optional[float] = None,
) -> SnapshotEstimate:
    """Empirical E[exp(-s I)] over the annulus interference model"""
    draws = sample_interference(cfg, samples, rng_seed, d_min, r_max)
    return summarize(np.exp(-s * draws), rng_seed)


__all__: List[str] = [
    "run_comm_snapshot",
    "run_radar_snapshot",
    "simulate_sinr",
    "estimate_metrics",
    "sample_interference",
    "estimate_interference_mgf",
    "summarize",
    "write_snapshot_records",
]
