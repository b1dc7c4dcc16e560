from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class OrliczConfig(BaseModel):
    """Constants of the Orlicz norm computation.

    ``kappa`` replaces the 1 on the right of the Trudinger-Moser constraint
    int (e^{|u/lambda|^2} - 1) dx <= kappa. Changing it yields an equivalent norm.
    """

    kappa: float = Field(1.0, gt=0.0)
    quad_tol: float = Field(1e-10, gt=0.0, lt=1.0)
    bisect_tol: float = Field(1e-8, gt=0.0, lt=1.0)
    max_doublings: int = Field(80, gt=0)
    # Cap on the natural-log exponent of the weighted integrand
    overflow_exponent: float = Field(700.0, gt=0.0, le=709.0)

    model_config = ConfigDict(frozen=True)


class MoserProbeReport(BaseModel):
    alpha_exp: float = Field(..., gt=0.0)
    beta: float = Field(..., gt=0.0)
    integral: float = Field(..., ge=0.0)
    ratio: float = Field(..., ge=0.0)


class SandwichReport(BaseModel):
    l2: float
    orlicz: float
    lower_bound: float
    upper_bound: Optional[float] = None
    lower_slack: float
    # None when the upper bound overflows
    upper_slack: Optional[float] = None
    upper_unbounded: bool = False

    @property
    def holds(self) -> bool:
        upper_ok = self.upper_unbounded or (self.upper_slack is not None and self.upper_slack >= 0.0)
        return self.lower_slack >= 0.0 and upper_ok


class MomentBoundRow(BaseModel):
    q: int = Field(..., ge=1)
    norm: float = Field(..., ge=0.0)
    bound: float = Field(..., ge=0.0)
    slack: float

    @property
    def holds(self) -> bool:
        return self.slack >= 0.0
