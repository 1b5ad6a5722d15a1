from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.core.errors import ParameterError
from app.utils.radio_utils import (
    db_to_linear,
    dbm_to_watt,
    mean_cell_radius,
    thermal_noise_dbm,
)


class NetworkConfig(BaseModel):
    """
    Physical and geometric parameters of one ISAC deployment scenario.

    Distances are in metres and densities per m^2. Every link uses the
    path-loss law (d / d0)^-alpha, so closed forms work in units of ``d0``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    lambda_b: float = Field(1e-5, ge=0, description="BS density per m^2")
    lambda_u: float = Field(1e-3, ge=0, description="User density per m^2")
    lambda_r: float = Field(1e-4, ge=0, description="Target density per m^2")
    n_tx: int = Field(4, ge=1, description="Transmit antennas N_t")
    n_rx: int = Field(8, ge=1, description="Receive antennas N_r")
    alpha: float = Field(2.7, gt=2, description="Path-loss exponent")
    p_tx_dbm: float = Field(43.0, description="Per-BS transmit power in dBm")
    noise_dbm: Optional[float] = Field(None, description="Noise power in dBm; thermal floor + 9 dB NF when omitted")
    gamma_c_db: float = Field(2.0, description="Communication SINR threshold in dB")
    gamma_r_db: float = Field(2.0, description="Radar SINR threshold in dB")
    h_t: float = Field(1.5, ge=0, description="Target altitude in m")
    h_bs: float = Field(25.0, ge=0, description="BS antenna height in m")
    h_ue: float = Field(1.5, ge=0, description="User antenna height in m")
    r_area: float = Field(250.0, gt=0, description="Analysis disc radius R_A in m")
    bandwidth_hz: float = Field(20e6, gt=0)
    kappa: int = Field(4, ge=1, description="Users served per BS")
    beta_int: float = Field(1.0, gt=0, description="Rate of the gamma interference-power law")
    rcs: float = Field(0.1, gt=0, description="Target cross-section factor")
    mvdr_gain: Optional[float] = Field(
        None, gt=0, description="Mean transmit x MVDR echo gain; 2 N_t N_r when omitted"
    )
    r_ref: Optional[float] = Field(None, gt=0, description="Radar reference distance in m; mean cell radius when omitted")
    d0: float = Field(100.0, gt=0, description="Path-loss reference distance in m")
    path_loss_db: float = Field(92.5, ge=0, description="One-way path loss at d0 in dB")
    alpha_r: Optional[float] = Field(None, gt=0, description="Round-trip radar exponent; 2*alpha when omitted")
    alpha_tilde: Optional[float] = Field(None, gt=0, description="Radar gamma shape; alpha when omitted")
    guard_annulus: bool = True
    shift_radar_nodes: bool = True
    matched_radar_beam: bool = False

    @model_validator(mode="after")
    def check_topology(self) -> "NetworkConfig":
        if self.lambda_u < 10.0 * self.lambda_b:
            raise ValueError(
                f"lambda_u ({self.lambda_u:g}) must be at least 10 x lambda_b ({self.lambda_b:g})"
            )
        if self.n_tx >= self.n_rx:
            raise ValueError(f"n_tx ({self.n_tx}) must be smaller than n_rx ({self.n_rx})")
        if self.kappa > self.n_tx:
            raise ValueError(f"kappa ({self.kappa}) cannot exceed n_tx ({self.n_tx}) under ZF precoding")
        return self

    # ----- derived quantities -----

    @property
    def gamma_c(self) -> float:
        return db_to_linear(self.gamma_c_db)

    @property
    def gamma_r(self) -> float:
        return db_to_linear(self.gamma_r_db)

    @property
    def p_tx_w(self) -> float:
        return dbm_to_watt(self.p_tx_dbm)

    @property
    def noise_w(self) -> float:
        noise_dbm = self.noise_dbm if self.noise_dbm is not None else thermal_noise_dbm(self.bandwidth_hz)
        return dbm_to_watt(noise_dbm)

    @property
    def noise_to_power(self) -> float:
        """sigma^2 / P referred to the path loss at d0; links are normalized to (d / d0)^-alpha"""
        return self.noise_w * db_to_linear(self.path_loss_db) / self.p_tx_w

    @property
    def height_offset(self) -> float:
        """Vertical BS-to-user separation in m"""
        return abs(self.h_bs - self.h_ue)

    @property
    def target_offset(self) -> float:
        """Vertical BS-to-target separation in m"""
        return abs(self.h_bs - self.h_t)

    @property
    def network_radius(self) -> float:
        """R_A, widened by a guard annulus of two mean cell radii when enabled"""
        if self.guard_annulus:
            return self.r_area + 2.0 * mean_cell_radius(self.lambda_b)
        return self.r_area

    @property
    def radar_gain(self) -> float:
        return self.mvdr_gain if self.mvdr_gain is not None else 2.0 * self.n_tx * self.n_rx

    @property
    def radar_exponent(self) -> float:
        return self.alpha_r if self.alpha_r is not None else 2.0 * self.alpha

    @property
    def radar_shape(self) -> float:
        return self.alpha_tilde if self.alpha_tilde is not None else self.alpha

    @property
    def reference_radius(self) -> float:
        """r_ref in metres"""
        if self.r_ref is not None:
            return self.r_ref
        return mean_cell_radius(self.lambda_b)

    @property
    def normalized_density(self) -> float:
        """BS density in units of d0^-2"""
        return self.lambda_b * self.d0 ** 2

    # ----- copies -----

    def replace(self, **changes: Any) -> "NetworkConfig":
        """Validated copy with the given fields changed"""
        try:
            return NetworkConfig.model_validate({**self.model_dump(), **changes})
        except ValidationError as exc:
            raise ParameterError(str(exc)) from exc

    def with_density(self, lambda_b: float) -> "NetworkConfig":
        """Copy at another BS density, raising lambda_u if needed to stay >= 10 lambda_b"""
        return self.replace(lambda_b=lambda_b, lambda_u=max(self.lambda_u, 10.0 * lambda_b))


class PowerModel(BaseModel):
    """Average BS power draw P_tx_bar / eta_eff + P_circ"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    p_tx_bar_dbm: float = Field(43.0, description="Transmit power draw in dBm")
    eta_eff: float = Field(0.5, gt=0, le=1, description="Amplifier/antenna efficiency")
    p_circ_dbm: float = Field(51.14, description="Static circuit power in dBm")

    @property
    def per_bs_power_w(self) -> float:
        return dbm_to_watt(self.p_tx_bar_dbm) / self.eta_eff + dbm_to_watt(self.p_circ_dbm)

    def replace(self, **changes: Any) -> "PowerModel":
        try:
            return PowerModel.model_validate({**self.model_dump(), **changes})
        except ValidationError as exc:
            raise ParameterError(str(exc)) from exc


def build_network_config(**fields: Any) -> NetworkConfig:
    """Construct a NetworkConfig, converting validation failures to ParameterError"""
    try:
        return NetworkConfig(**fields)
    except ValidationError as exc:
        raise ParameterError(str(exc)) from exc
