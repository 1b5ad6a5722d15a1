from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.schemas.network import NetworkConfig, PowerModel


@dataclass(frozen=True)
class Scene:
    """
    Points drawn for one snapshot. Planar positions are (n, 2) arrays in metres,
    targets are (n, 3) with the altitude in the last column. Associations map
    user/target row index to the row index of the nearest BS in the plane.
    """

    radius: float
    bs_positions: np.ndarray
    user_positions: np.ndarray
    target_positions: np.ndarray
    user_association: Dict[int, int] = field(default_factory=dict)
    target_association: Dict[int, int] = field(default_factory=dict)

    @property
    def bs_count(self) -> int:
        return int(self.bs_positions.shape[0])


class SnapshotEstimate(BaseModel):
    """Monte Carlo mean with a 95% normal-approximation confidence interval"""

    mean: float
    ci_low: float
    ci_high: float
    trials: int = Field(..., ge=1)
    seed: int

    @model_validator(mode="after")
    def check_interval(self) -> "SnapshotEstimate":
        if not self.ci_low <= self.mean <= self.ci_high:
            raise ValueError("confidence interval must contain the mean")
        return self

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)

    def contains(self, value: float, relative_margin: float = 0.0) -> bool:
        margin = relative_margin * abs(self.mean)
        return self.ci_low - margin <= value <= self.ci_high + margin


class MetricEstimates(BaseModel):
    """Snapshot estimates of every metric of one configuration"""

    coverage_comm: SnapshotEstimate
    coverage_radar: SnapshotEstimate
    pse_comm: SnapshotEstimate = Field(..., description="bit/s/m^2")
    pse_radar: SnapshotEstimate = Field(..., description="bit/s/m^2")
    ee: SnapshotEstimate = Field(..., description="bit/Joule")


class SimulationRequest(BaseModel):
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    power: PowerModel = Field(default_factory=PowerModel)
    trials: int = Field(2000, ge=100)
    seed: Optional[int] = None
