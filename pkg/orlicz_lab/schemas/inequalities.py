from typing import Optional

from pydantic import BaseModel, Field, computed_field


# Radial decay bound sup_r |u(r)| r^{2/(p+2)} <= C_p ||u||_p^{p/(p+2)} ||grad u||^{2/(p+2)}
class RadialBoundReport(BaseModel):
    p: float = Field(..., ge=1.0)
    ratio: Optional[float] = None
    constant: float = Field(..., gt=0.0)
    # Set when ||u||_p or ||grad u|| vanishes
    undefined: bool = False

    @computed_field
    @property
    def holds(self) -> bool:
        return self.undefined or self.ratio <= self.constant * (1.0 + 1e-9)


class LogIneqReport(BaseModel):
    lam: float = Field(..., gt=0.0)
    mu: float = Field(..., gt=0.0, le=1.0)
    alpha_h: float = Field(..., gt=0.0, lt=1.0)
    # Smallest C making the logarithmic inequality hold for the measured norms
    empirical_C: float = Field(..., ge=0.0)
    sup_norm: float = Field(..., ge=0.0)
    energy_norm: float = Field(..., ge=0.0)
    holder_norm: float = Field(..., ge=0.0)
    on_unit_disk: bool = False
    degenerate: bool = False


class BMOProbeReport(BaseModel):
    alpha: float = Field(..., gt=0.0)
    # Mean of g_alpha over the ball B(0, e^{-alpha/2}); zero by the angular factor
    mean: float
    average_modulus: float = Field(..., ge=0.0)
    closed_form: float = Field(..., ge=0.0)

    @computed_field
    @property
    def relative_error(self) -> float:
        return abs(self.average_modulus - self.closed_form) / self.closed_form
