import math
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from app.schemas.network import NetworkConfig, PowerModel


class OptimizationMethod(str, Enum):
    NEWTON = "newton"
    CLOSED_FORM_COMM = "closed_form_comm"
    CLOSED_FORM_RADAR_CUBIC = "closed_form_radar_cubic"
    GRID = "grid"


class OptimizationMode(str, Enum):
    ISAC = "isac"
    COMM_ONLY = "comm_only"
    RADAR_ONLY = "radar_only"

    @property
    def includes_comm(self) -> bool:
        return self is not OptimizationMode.RADAR_ONLY

    @property
    def includes_radar(self) -> bool:
        return self is not OptimizationMode.COMM_ONLY


class ObjectiveCoefficients(BaseModel):
    """
    Coefficients of the order-1 Laguerre EE objective.

    Densities inside the objective are normalized to lambda * d0^2; ``d0`` is
    carried so callers can convert back to per m^2.
    """

    a1: float = Field(..., gt=0)
    a2: Tuple[float, ...]
    a3: float = Field(..., gt=0)
    b1: Tuple[float, ...]
    b2: Tuple[float, ...]
    b3: float
    b4: float
    b5: float = Field(..., ge=0)
    n_terms: int = Field(..., ge=1, description="N, the number of radar series terms")
    power_per_bs_w: float = Field(..., gt=0)
    bandwidth_hz: float = Field(..., gt=0)
    d0: float = Field(..., gt=0)

    @model_validator(mode="after")
    def check_finite(self) -> "ObjectiveCoefficients":
        values = [self.a1, self.a3, self.b3, self.b4, self.b5, *self.a2, *self.b1, *self.b2]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("objective coefficients must be finite")
        if len(self.b1) != self.n_terms or len(self.b2) != self.n_terms:
            raise ValueError("b1/b2 must carry one entry per radar series term")
        return self

    def to_physical(self, normalized_density: float) -> float:
        """lambda * d0^2 -> per m^2"""
        return normalized_density / self.d0 ** 2

    def to_normalized(self, lambda_b: float) -> float:
        return lambda_b * self.d0 ** 2


class OptimizationResult(BaseModel):
    lambda_star: float = Field(..., gt=0, description="per m^2")
    ee_star: float = Field(..., ge=0, description="bit/Joule")
    method: OptimizationMethod
    mode: OptimizationMode = OptimizationMode.ISAC
    iterations: int = Field(0, ge=0)
    converged: bool = True
    bracket: Tuple[float, float]
    residual: Optional[float] = None
    unimodal: Optional[bool] = None
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_bracket(self) -> "OptimizationResult":
        low, high = self.bracket
        if low > high:
            raise ValueError("bracket must be ordered (low, high)")
        # relative slack for values mapped back from normalized units
        if not low * (1 - 1e-9) <= self.lambda_star <= high * (1 + 1e-9):
            raise ValueError(f"lambda_star {self.lambda_star:g} outside bracket {self.bracket}")
        return self

    @property
    def cell_radius(self) -> float:
        """Equivalent mean cell radius 1/sqrt(pi * lambda*) in metres"""
        return 1.0 / math.sqrt(math.pi * self.lambda_star)


class OptimizationRequest(BaseModel):
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    power: PowerModel = Field(default_factory=PowerModel)
    mode: OptimizationMode = OptimizationMode.ISAC
    lambda0: Optional[float] = Field(None, gt=0)


class OptimizationResponse(BaseModel):
    result: OptimizationResult
    cell_radius_m: float
