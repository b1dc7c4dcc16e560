from typing import Callable, Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Profile(BaseModel):
    """Piecewise-linear profile psi on a uniform grid of [0, t_max].

    psi vanishes on (-inf, 0] and is held constant beyond t_max.
    """

    t_max: float = Field(..., gt=0.0)
    values: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("values", mode="before")
    @classmethod
    def as_float_array(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def check_profile(self) -> "Profile":
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError("a profile needs at least two samples")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("profile samples must be finite")
        if abs(self.values[0]) > 1e-12:
            raise ValueError(f"profiles vanish at t = 0, got {self.values[0]!r}")
        return self

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        t_max: float,
        n_points: int,
        shift: float = 0.0,
    ) -> "Profile":
        """Sample t -> fn(t + shift), zero wherever t + shift <= 0."""
        t = np.linspace(0.0, t_max, n_points)
        arg = t + shift
        values = np.where(arg > 0.0, fn(np.maximum(arg, 0.0)), 0.0)
        values[0] = 0.0
        return cls(t_max=t_max, values=values)

    @classmethod
    def zero(cls, t_max: float = 1.0, n_points: int = 2) -> "Profile":
        return cls(t_max=t_max, values=np.zeros(n_points))

    @property
    def n_points(self) -> int:
        return int(self.values.size)

    @property
    def dt(self) -> float:
        return self.t_max / (self.n_points - 1)

    @property
    def t_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.t_nodes, self.values, left=0.0, right=self.values[-1])
        return np.where(t > 0.0, out, 0.0)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.dt

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        cell = np.clip(np.floor(t / self.dt).astype(int), 0, self.n_points - 2)
        inside = (t > 0.0) & (t < self.t_max)
        return np.where(inside, self.slopes[cell], 0.0)

    @property
    def grad_norm(self) -> float:
        # exact for the piecewise-linear interpolant
        return float(np.sqrt(np.sum(self.slopes**2) * self.dt))

    @property
    def is_empty(self) -> bool:
        return self.grad_norm == 0.0

    def sup_ratio(self) -> float:
        """sup_{t>0} |psi(t)| / sqrt(t) over the nodes."""
        t = self.t_nodes[1:]
        return float(np.max(np.abs(self.values[1:]) / np.sqrt(t)))

    def rescaled(self, lam: float) -> "Profile":
        """psi_lam(t) = psi(lam t) / sqrt(lam)."""
        if lam <= 0:
            raise ValueError("rescaling factor must be positive")
        return Profile(t_max=self.t_max / lam, values=self.values / np.sqrt(lam))

    def scaled(self, c: float) -> "Profile":
        return Profile(t_max=self.t_max, values=c * self.values)


class ScaledBubble(BaseModel):
    """A scale n -> alpha_n paired with a profile."""

    scale_at: Callable[[int], float]
    profile: Profile

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def alpha(self, n: int) -> float:
        value = float(self.scale_at(n))
        if not value > 0.0:
            raise ValueError(f"scale must be positive, got alpha_{n} = {value}")
        return value

    def check_monotone(self, indices: Iterable[int]) -> bool:
        scales = [self.alpha(n) for n in sorted(indices)]
        return all(b >= a for a, b in zip(scales, scales[1:]))
