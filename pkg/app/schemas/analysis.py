from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.network import NetworkConfig, PowerModel


class RadialMapping(str, Enum):
    """How Gauss-Laguerre nodes are mapped onto serving distances"""

    DENSITY = "density"
    SCALED = "scaled"


class QuadratureRule(BaseModel):
    """Gauss-Laguerre nodes r_i and weights H_i for the weight e^-x on [0, inf)"""

    model_config = ConfigDict(frozen=True)

    order: int = Field(..., ge=1, le=64)
    nodes: Tuple[float, ...]
    weights: Tuple[float, ...]

    @model_validator(mode="after")
    def check_rule(self) -> "QuadratureRule":
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ValueError("nodes and weights must both have `order` entries")
        if any(node <= 0 for node in self.nodes):
            raise ValueError("Laguerre nodes must be positive")
        if any(b <= a for a, b in zip(self.nodes, self.nodes[1:])):
            raise ValueError("Laguerre nodes must be strictly increasing")
        if any(weight <= 0 for weight in self.weights):
            raise ValueError("Laguerre weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"Laguerre weights must sum to 1, got {sum(self.weights)!r}")
        return self


class EulerInversionParams(BaseModel):
    """Euler-series Laplace inversion controls (decay A, N terms, Q binomial averaging)"""

    model_config = ConfigDict(frozen=True)

    A: float = Field(18.4, gt=0)
    N: int = Field(15, ge=1)
    Q: int = Field(15, ge=1)


class AnalysisResult(BaseModel):
    """
    Closed-form evaluation of one configuration.

    PSE values are area rates in bit/s/m^2 (bandwidth applied), so
    ee = (pse_comm + pse_radar) / network power density.
    """

    lambda_b: float
    coverage_comm: float = Field(..., ge=0, le=1)
    coverage_radar: float = Field(..., ge=0, le=1)
    pse_comm: float = Field(..., ge=0, description="bit/s/m^2")
    pse_radar: float = Field(..., ge=0, description="bit/s/m^2")
    ee: float = Field(..., ge=0, description="bit/Joule")
    ee_comm: float = Field(..., ge=0, description="bit/Joule, communication share")
    ee_radar: float = Field(..., ge=0, description="bit/Joule, sensing share")
    power_density_w_m2: float = Field(..., ge=0)
    quad_order: int
    mapping: RadialMapping = RadialMapping.DENSITY


class AnalysisRequest(BaseModel):
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    power: PowerModel = Field(default_factory=PowerModel)
    quad_order: int = Field(20, ge=1, le=64)
    mapping: RadialMapping = RadialMapping.DENSITY
