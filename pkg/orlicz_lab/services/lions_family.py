"""Closed-form concentration families.

In log coordinates the Lions function is f_alpha(s) = sqrt(alpha/2pi) L(s/alpha)
with L(t) = min(max(t, 0), 1), and a bubble with scale alpha and profile psi is
sqrt(alpha/2pi) psi(s/alpha).
"""
from typing import Callable, Sequence, Tuple

import numpy as np

from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.profile import Profile, ScaledBubble
from orlicz_lab.services.radial_core import TWO_PI, RadialClosure

SQRT2 = np.sqrt(2.0)


def L(t) -> np.ndarray:
    return np.clip(np.asarray(t, dtype=float), 0.0, 1.0)


def L_prime(t) -> np.ndarray:
    """Indicator of (0, 1), the slope of L."""
    t = np.asarray(t, dtype=float)
    return np.where((t > 0.0) & (t < 1.0), 1.0, 0.0)


def _gk(t) -> np.ndarray:
    return L(t) + SQRT2 * L(np.asarray(t, dtype=float) / 2.0)


class LionsFunction(RadialClosure):
    def __init__(self, alpha: float):
        if alpha <= 0:
            raise PreconditionError(f"alpha must be positive, got {alpha}")
        self.alpha = float(alpha)

    def of_s(self, s):
        return np.sqrt(self.alpha / TWO_PI) * L(np.asarray(s, dtype=float) / self.alpha)

    def __repr__(self) -> str:
        return f"LionsFunction(alpha={self.alpha:g})"


class DilatedFunction(RadialClosure):
    """x -> base(x / R)."""

    def __init__(self, base: RadialClosure, R: float):
        if R <= 0:
            raise PreconditionError(f"dilation radius must be positive, got {R}")
        self.base = base
        self.log_R = float(np.log(R))

    def of_s(self, s):
        return self.base.of_s(np.asarray(s, dtype=float) + self.log_R)


class BubbleFunction(RadialClosure):
    def __init__(self, alpha: float, profile: Profile):
        if alpha <= 0:
            raise PreconditionError(f"scale must be positive, got {alpha}")
        self.alpha = float(alpha)
        self.profile = profile

    def of_s(self, s):
        return np.sqrt(self.alpha / TWO_PI) * self.profile(np.asarray(s, dtype=float) / self.alpha)


class LinearCombination(RadialClosure):
    def __init__(self, terms: Sequence[Tuple[float, RadialClosure]]):
        self.terms = list(terms)

    def of_s(self, s):
        s = np.asarray(s, dtype=float)
        total = np.zeros_like(s)
        for coef, closure in self.terms:
            total = total + coef * closure.of_s(s)
        return total


def lions_f(alpha: float) -> LionsFunction:
    return LionsFunction(alpha)


def lions_l2_closed_form(alpha: float) -> float:
    """||f_alpha||_{L^2}^2 = (1 - e^{-2 alpha}) / (4 alpha) - e^{-2 alpha} / 2."""
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    return float(-np.expm1(-2.0 * alpha) / (4.0 * alpha) - 0.5 * np.exp(-2.0 * alpha))


def lions_grad_closed_form(alpha: float) -> float:
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    return 1.0


def scaled_g(alpha: float, R_alpha: float) -> DilatedFunction:
    return DilatedFunction(lions_f(alpha), R_alpha)


def sum_h(a: float, b: float, alpha: float) -> LinearCombination:
    """h_alpha = a f_alpha + b f_{alpha^2}, two bubbles with orthogonal scales."""
    if alpha <= 1:
        raise PreconditionError(f"sum_h needs alpha > 1, got {alpha}")
    return LinearCombination([(a, lions_f(alpha)), (b, lions_f(alpha**2))])


def lions_profile(t_max: float = 4.0, n_points: int = 1025) -> Profile:
    return Profile.from_function(L, t_max, n_points)


def shifted_lions_profile(a: float, t_max: float = 4.0, n_points: int = 1025) -> Profile:
    """L_a(t) = L(t + a), a < 0: the profile of f_alpha dilated by e^{a alpha}."""
    if a >= 0:
        raise PreconditionError(f"shift must be negative, got {a}")
    return Profile.from_function(L, t_max, n_points, shift=a)


def gk_profile(t_max: float = 8.0, n_points: int = 2049) -> Profile:
    """Profile of f_k + f_{2k} at scale k."""
    return Profile.from_function(_gk, t_max, n_points)


def bubble_to_function(b: ScaledBubble, n: int, grid: LogGrid) -> RadialFunction:
    alpha = b.alpha(n)
    values = BubbleFunction(alpha, b.profile).of_s(grid.nodes)
    return RadialFunction(grid=grid, values=values)


def family_grid(alpha_max: float, ds: float = 1.0 / 64.0, s_min: float = -2.0) -> LogGrid:
    return LogGrid.from_spacing(s_min, max(4.0 * alpha_max, 50.0), ds)


def constant_scale(alpha: float) -> Callable[[int], float]:
    return lambda n: alpha
