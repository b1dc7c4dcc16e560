from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from orlicz_lab.core.exceptions import PreconditionError


class LogGrid(BaseModel):
    """Uniform grid in the log-radius s = -log r."""

    s_min: float
    s_max: float
    n_points: int = Field(..., ge=2)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_order(self) -> "LogGrid":
        if not self.s_min < self.s_max:
            raise ValueError("s_min must be smaller than s_max")
        return self

    @classmethod
    def from_spacing(cls, s_min: float, s_max: float, ds: float) -> "LogGrid":
        n = int(round((s_max - s_min) / ds)) + 1
        return cls(s_min=s_min, s_max=s_min + (n - 1) * ds, n_points=n)

    @property
    def ds(self) -> float:
        return (self.s_max - self.s_min) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, self.n_points)

    def same_as(self, other: "LogGrid") -> bool:
        return (self.s_min, self.s_max, self.n_points) == (
            other.s_min,
            other.s_max,
            other.n_points,
        )


class RadialFunction(BaseModel):
    """Samples v(s_i) = u(e^{-s_i}) of a radial function."""

    grid: LogGrid
    values: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("values", mode="before")
    @classmethod
    def as_float_array(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def check_samples(self) -> "RadialFunction":
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} samples, got shape {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("radial function samples must be finite")
        return self

    @classmethod
    def zeros(cls, grid: LogGrid) -> "RadialFunction":
        return cls(grid=grid, values=np.zeros(grid.n_points))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def _check_grid(self, other: "RadialFunction") -> None:
        if not self.grid.same_as(other.grid):
            raise PreconditionError("radial functions live on different grids")

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        self._check_grid(other)
        return RadialFunction(grid=self.grid, values=self.values + other.values)

    def __sub__(self, other: "RadialFunction") -> "RadialFunction":
        self._check_grid(other)
        return RadialFunction(grid=self.grid, values=self.values - other.values)

    def __mul__(self, c: float) -> "RadialFunction":
        return RadialFunction(grid=self.grid, values=float(c) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "RadialFunction":
        return self * -1.0


# Norms of a radial function
class NormReport(BaseModel):
    l2: float = Field(..., ge=0.0)
    grad_l2: float = Field(..., ge=0.0)
    h1: float = Field(..., ge=0.0)


class TailMassReport(BaseModel):
    mass: float = Field(..., ge=0.0)
    truncated: bool = False


class Resampled(BaseModel):
    function: RadialFunction
    extrapolated: bool = False

    model_config = ConfigDict(arbitrary_types_allowed=True)
