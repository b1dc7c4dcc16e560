from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.profile import Profile


class ExtractionConfig(BaseModel):
    """Knobs of the scale-and-profile extraction.

    The trailing indices of the sequence stand in for n -> infinity:
    ``a0_window`` of them for the limsup of Orlicz norms and ``ref_count``
    (or the explicit ``ref_indices``) for profile averaging.
    """

    a0_window: int = Field(3, gt=0)
    ref_count: int = Field(3, gt=0)
    ref_indices: Optional[List[int]] = None
    ortho_threshold: float = Field(2.0, gt=0.0)
    l_max: int = Field(4, gt=0)
    # Stop once the remainder amplitude drops below rem_tol * A_0
    rem_tol: float = Field(0.05, gt=0.0)
    profile_t_max: float = Field(8.0, gt=0.0)
    profile_dt: float = Field(1.0 / 16.0, gt=0.0)
    compactness_tol: float = Field(1e-3, gt=0.0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_windows(self) -> "ExtractionConfig":
        if self.ref_indices is None and self.a0_window > self.ref_count:
            raise ValueError("a0_window cannot exceed ref_count")
        return self

    def reference(self, n_range: List[int]) -> List[int]:
        if self.ref_indices is not None:
            missing = set(self.ref_indices) - set(n_range)
            if missing:
                raise ValueError(f"reference indices {sorted(missing)} outside n_range")
            return sorted(self.ref_indices)
        if self.ref_count > len(n_range):
            raise ValueError("ref_count exceeds the sampled index range")
        return list(n_range[-self.ref_count:])

    def window(self, n_range: List[int]) -> List[int]:
        if self.a0_window > len(n_range):
            raise ValueError("a0_window exceeds the sampled index range")
        return list(n_range[-self.a0_window:])

    def t_grid(self) -> np.ndarray:
        n = int(round(self.profile_t_max / self.profile_dt)) + 1
        return np.linspace(0.0, (n - 1) * self.profile_dt, n)


class RadialSequence(BaseModel):
    """u_n on a shared log-grid, sampled lazily and memoised."""

    generator: Callable[[int], RadialFunction]
    n_range: List[int]
    grid: LogGrid

    _cache: Dict[int, RadialFunction] = PrivateAttr(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_range(self) -> "RadialSequence":
        if not self.n_range:
            raise ValueError("n_range must not be empty")
        if any(b <= a for a, b in zip(self.n_range, self.n_range[1:])):
            raise ValueError("n_range must be increasing")
        return self

    def at(self, n: int) -> RadialFunction:
        if n not in self._cache:
            f = self.generator(n)
            if not f.grid.same_as(self.grid):
                raise ValueError(f"u_{n} is not sampled on the sequence grid")
            self._cache[n] = f
        return self._cache[n]


class ScaleDetection(BaseModel):
    alpha: Optional[float] = None
    w_max: float
    degenerate: bool = False
    no_concentration: bool = False


class OrthogonalityReport(BaseModel):
    orthogonal: bool
    margin: float = Field(..., ge=0.0)


class CompactnessReport(BaseModel):
    R_list: List[float]
    n_list: List[int]
    # masses[i][j]: tail mass of u_{n_i} outside the ball of radius R_j
    masses: List[List[float]]
    tail_sup: List[float]
    passes: bool


class BubbleRecord(BaseModel):
    scales: Dict[int, float]
    profile: Profile
    grad_norm: float = Field(..., ge=0.0)
    # Remainder amplitude at which the bubble was detected
    amplitude: float = Field(..., ge=0.0)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def scale_at(self, n: int) -> float:
        return self.scales[n]


class DecompositionResult(BaseModel):
    bubbles: List[BubbleRecord] = []
    remainder_orlicz: List[float] = []
    stability_defect: List[float] = []
    a0_estimate: float = Field(..., ge=0.0)
    grad_sq: float = Field(0.0, ge=0.0)
    budget_ok: bool = True

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def levels(self) -> int:
        return len(self.bubbles)
