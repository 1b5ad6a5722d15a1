"""
Radio unit conversions and network-level helpers shared by every engine
"""
import math
from typing import TYPE_CHECKING

from app.core.errors import ParameterError

if TYPE_CHECKING:
    from app.schemas.network import NetworkConfig, PowerModel


def dbm_to_watt(x_dbm: float) -> float:
    """Convert a power level from dBm to watts"""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watt_to_dbm(x_watt: float) -> float:
    """Convert a power level from watts to dBm"""
    if x_watt <= 0:
        raise ParameterError(f"Power must be positive to express in dBm, got {x_watt}")
    return 10.0 * math.log10(x_watt) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def thermal_noise_dbm(bandwidth_hz: float, noise_figure_db: float = 9.0) -> float:
    """
    Receiver noise floor: -174 dBm/Hz thermal density over the bandwidth plus
    the receiver noise figure.
    """
    if bandwidth_hz <= 0:
        raise ParameterError(f"Bandwidth must be positive, got {bandwidth_hz}")
    return -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def network_power_density(cfg: "NetworkConfig", pm: "PowerModel") -> float:
    """
    Area power consumption P_T = lambda_b * (P_tx_bar / eta_eff + P_circ) in W/m^2.
    """
    return cfg.lambda_b * pm.per_bs_power_w


def mean_cell_radius(lambda_b: float) -> float:
    """Average cell radius 1/sqrt(pi * lambda_b) in metres"""
    if lambda_b <= 0:
        raise ParameterError(f"BS density must be positive, got {lambda_b}")
    return 1.0 / math.sqrt(math.pi * lambda_b)


def density_for_radius(radius_m: float) -> float:
    """Inverse of mean_cell_radius"""
    if radius_m <= 0:
        raise ParameterError(f"Cell radius must be positive, got {radius_m}")
    return 1.0 / (math.pi * radius_m ** 2)


__all__ = [
    "dbm_to_watt",
    "watt_to_dbm",
    "db_to_linear",
    "thermal_noise_dbm",
    "network_power_density",
    "mean_cell_radius",
    "density_for_radius",
]
