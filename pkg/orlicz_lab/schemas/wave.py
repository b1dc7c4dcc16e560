from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator


class Regime(str, Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


class EvolutionMode(str, Enum):
    NONLINEAR = "nonlinear"
    LINEAR = "linear"


class RGrid(BaseModel):
    """Uniform radial grid r_i = i dr on [0, R]."""

    R: float = Field(..., gt=0.0)
    n_r: int = Field(..., ge=3)

    model_config = ConfigDict(frozen=True)

    @computed_field
    @property
    def dr(self) -> float:
        return self.R / (self.n_r - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.R, self.n_r)


class WaveState(BaseModel):
    u: np.ndarray
    ut: np.ndarray
    time: float = 0.0

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("u", "ut", mode="before")
    @classmethod
    def as_float_array(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def check_state(self) -> "WaveState":
        if self.u.ndim != 1 or self.u.shape != self.ut.shape:
            raise ValueError("u and ut must be one-dimensional arrays of equal length")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.ut))):
            raise ValueError("wave state must be finite")
        return self

    def __sub__(self, other: "WaveState") -> "WaveState":
        return WaveState(u=self.u - other.u, ut=self.ut - other.ut, time=self.time)


class CauchyData(BaseModel):
    """Initial position phi and velocity psi, both radial closures of r."""

    phi: Callable[[np.ndarray], np.ndarray]
    psi: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = ""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def scaled(self, c: float) -> "CauchyData":
        phi, psi = self.phi, self.psi
        return CauchyData(
            phi=lambda r: c * np.asarray(phi(r), dtype=float),
            psi=None if psi is None else (lambda r: c * np.asarray(psi(r), dtype=float)),
            label=f"{c:g}*{self.label}" if self.label else "",
        )


# Energy components at a fixed time
class EnergyReport(BaseModel):
    kinetic: float = Field(..., ge=0.0)
    gradient: float = Field(..., ge=0.0)
    nonlinear: float = Field(..., ge=0.0)
    total: float = Field(..., ge=0.0)
    # kinetic + gradient + ||u||^2
    E_c: float = Field(..., ge=0.0)


class WaveConfig(BaseModel):
    T: float = Field(..., gt=0.0)
    dt: Optional[float] = Field(None, gt=0.0)
    cfl: float = Field(0.5, gt=0.0, le=0.8)
    mode: EvolutionMode = EvolutionMode.NONLINEAR
    # Store every k-th step; None keeps about a hundred samples
    store_every: Optional[int] = Field(None, ge=1)

    model_config = ConfigDict(frozen=True)

    def time_step(self, grid: RGrid) -> float:
        return self.dt if self.dt is not None else self.cfl * grid.dr


class Trajectory(BaseModel):
    mode: EvolutionMode
    grid: RGrid
    dt: float
    states: List[WaveState]
    energies: List[EnergyReport]

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def times(self) -> List[float]:
        return [state.time for state in self.states]

    @property
    def final(self) -> WaveState:
        return self.states[-1]

    def conserved(self) -> List[float]:
        """Total energy in nonlinear mode, E_c in linear mode."""
        if self.mode == EvolutionMode.NONLINEAR:
            return [e.total for e in self.energies]
        return [e.E_c for e in self.energies]

    def energy_drift(self) -> float:
        values = np.asarray(self.conserved())
        if values[0] == 0.0:
            return float(np.max(np.abs(values)))
        return float(np.max(np.abs(values - values[0])) / values[0])
