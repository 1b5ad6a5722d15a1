from enum import Enum
from typing import List, Set

from pydantic import BaseModel, Field, model_validator


class SweepVariable(str, Enum):
    LAMBDA_B = "lambda_b"
    GAMMA_JOINT = "gamma_joint"
    GAMMA_C = "gamma_c"
    GAMMA_R = "gamma_r"
    P_TX_DBM = "p_tx_dbm"
    H_T = "h_t"
    R_AREA = "r_area"


class Engine(str, Enum):
    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"


class SweepSpec(BaseModel):
    variable: SweepVariable
    values: List[float] = Field(..., min_length=1)
    engines: Set[Engine] = Field(default_factory=lambda: {Engine.ANALYTIC})
    trials: int = Field(100000, ge=1)
    seed: int = 2024

    @model_validator(mode="after")
    def check_sweep(self) -> "SweepSpec":
        if not self.engines:
            raise ValueError("at least one engine must be selected")
        steps = [b - a for a, b in zip(self.values, self.values[1:])]
        if steps and not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise ValueError("sweep values must be strictly monotone")
        if Engine.MONTECARLO in self.engines and self.trials < 100:
            raise ValueError("montecarlo sweeps need at least 100 trials")
        return self

    @property
    def ordered_engines(self) -> List[Engine]:
        """Engines in fixed output order"""
        return [engine for engine in Engine if engine in self.engines]


class SweepSummary(BaseModel):
    variable: SweepVariable
    points: int
    rows: int
    output_path: str


class ValidationRow(BaseModel):
    metric: str
    analytic: float
    mc_mean: float
    ci_low: float
    ci_high: float
    tolerance_low: float
    tolerance_high: float
    passed: bool


class ValidationReport(BaseModel):
    trials: int
    seed: int
    rows: List[ValidationRow]
    warnings: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failed_metrics(self) -> List[str]:
        return [row.metric for row in self.rows if not row.passed]

