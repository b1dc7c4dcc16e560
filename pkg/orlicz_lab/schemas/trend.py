import math
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class TrendReport(BaseModel):
    """Observed values of a quantity along an increasing parameter."""

    quantity: str = ""
    parameters: List[float]
    observed: List[float]
    # math.inf marks a divergence target
    target: float
    converged: bool
    rate_estimate: Optional[float] = None
    monotone_tail: bool = True
    lower: Optional[List[float]] = None
    upper: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_series(self) -> "TrendReport":
        if len(self.parameters) != len(self.observed):
            raise ValueError("parameters and observed differ in length")
        if any(b <= a for a, b in zip(self.parameters, self.parameters[1:])):
            raise ValueError("parameters must be strictly increasing")
        if not all(math.isfinite(x) for x in self.observed):
            raise ValueError("observed values must be finite")
        return self

    @property
    def diverges(self) -> bool:
        return math.isinf(self.target)

    def inside_bracket(self) -> List[bool]:
        if self.lower is None or self.upper is None:
            return [True] * len(self.observed)
        return [lo <= x <= hi for lo, x, hi in zip(self.lower, self.observed, self.upper)]


class ProfileBoundsReport(BaseModel):
    lower: float = Field(..., ge=0.0)
    upper: float = Field(..., ge=0.0)
    trend: TrendReport
    within: bool
