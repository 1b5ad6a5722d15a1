"""
Point-process sampling and scene construction for the snapshot simulator
"""
import logging
import math
from typing import Dict, Union

import numpy as np

from app.core.errors import ParameterError
from app.schemas.network import NetworkConfig
from app.schemas.simulation import Scene

logger = logging.getLogger(__name__)

RngLike = Union[int, np.random.Generator]

MAX_SCENE_DRAWS = 10000


def snapshot_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for snapshot ``index`` of run ``seed``"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return snapshot_rng(int(rng), 0)


def sample_ppp(density: float, radius: float, rng_seed: RngLike) -> np.ndarray:
    """
    Homogeneous PPP on the disc of the given radius centred at the origin.

    Returns an (n, 2) array; n ~ Poisson(density * pi * radius^2), points uniform
    on the disc via sqrt-scaled radii.
    """
    if density < 0:
        raise ParameterError(f"Point density must be nonnegative, got {density}")
    if radius <= 0:
        raise ParameterError(f"Disc radius must be positive, got {radius}")
    rng = as_generator(rng_seed)
    count = rng.poisson(density * math.pi * radius ** 2)
    rho = radius * np.sqrt(rng.random(count))
    phi = 2.0 * math.pi * rng.random(count)
    return np.column_stack((rho * np.cos(phi), rho * np.sin(phi)))


def simulation_radius(cfg: NetworkConfig) -> float:
    """Radius of the simulated disc; the analytic engine integrates over the same one"""
    return cfg.network_radius


def _associate(points: np.ndarray, bs_positions: np.ndarray) -> Dict[int, int]:
    if points.shape[0] == 0:
        return {}
    distance = np.linalg.norm(points[:, None, :2] - bs_positions[None, :, :], axis=2)
    return {i: int(j) for i, j in enumerate(np.argmin(distance, axis=1))}


def build_scene(cfg: NetworkConfig, rng: np.random.Generator, full: bool = False) -> Scene:
    """
    Draw the BS layout (conditioned on a non-empty simulated disc) and place the
    typical user and typical target above the origin at row 0. With ``full``
    the user and target populations are drawn and associated as well.
    """
    if cfg.lambda_b <= 0:
        raise ParameterError("Snapshots need a positive BS density")
    radius = simulation_radius(cfg)

    for attempt in range(MAX_SCENE_DRAWS):
        bs_positions = sample_ppp(cfg.lambda_b, radius, rng)
        if bs_positions.shape[0]:
            break
    else:
        raise ParameterError(
            f"No BS fell inside the {radius:.0f} m disc in {MAX_SCENE_DRAWS} draws; density {cfg.lambda_b:g} is too low"
        )
    if attempt:
        logger.debug(f"Scene accepted after {attempt + 1} draws")

    users = np.zeros((1, 2))
    targets = np.array([[0.0, 0.0, cfg.h_t]])
    if full:
        users = np.vstack((users, sample_ppp(cfg.lambda_u, radius, rng)))
        extra_targets = sample_ppp(cfg.lambda_r, radius, rng)
        altitude = np.full((extra_targets.shape[0], 1), cfg.h_t)
        targets = np.vstack((targets, np.hstack((extra_targets, altitude))))

    return Scene(
        radius=radius,
        bs_positions=bs_positions,
        user_positions=users,
        target_positions=targets,
        user_association=_associate(users, bs_positions),
        target_association=_associate(targets, bs_positions),
    )
