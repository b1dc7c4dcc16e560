"""Probes of the auxiliary inequalities around the Orlicz space.

Radial decay, the logarithmic L^infinity estimate, superlevel-set measures
and the ball averages separating BMO from the Orlicz space.
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy.integrate import quad

from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.inequalities import BMOProbeReport, LogIneqReport, RadialBoundReport
from orlicz_lab.services.radial_core import grad_l2_norm, l2_norm, l2_norm_squared, lp_norm

logger = logging.getLogger(__name__)

HOLDER_NODES = 2000


def radial_constant(p: float) -> float:
    """C_p = ((p+2)/2)^{2/(p+2)}; C_2 = sqrt(2)."""
    return ((p + 2.0) / 2.0) ** (2.0 / (p + 2.0))


def radial_bound_check(f: RadialFunction, p: float) -> RadialBoundReport:
    """sup_r |u(r)| r^{2/(p+2)} / (||u||_p^{p/(p+2)} ||grad u||^{2/(p+2)}) against C_p."""
    if p < 1:
        raise PreconditionError(f"p must be at least 1, got {p}")
    constant = radial_constant(p)
    lp = lp_norm(f, p)
    grad = grad_l2_norm(f)
    if lp == 0.0 or grad == 0.0:
        return RadialBoundReport(p=p, constant=constant, undefined=True)

    s = f.grid.nodes
    weighted = np.abs(f.values) * np.exp(-2.0 * s / (p + 2.0))
    denominator = lp ** (p / (p + 2.0)) * grad ** (2.0 / (p + 2.0))
    return RadialBoundReport(p=p, ratio=float(np.max(weighted) / denominator), constant=constant)


def holder_seminorm(f: RadialFunction, alpha_h: float, max_nodes: int = HOLDER_NODES) -> float:
    """sup |u(r_i) - u(r_j)| / |r_i - r_j|^alpha_h over pairs of nodes along a ray.

    Grids longer than ``max_nodes`` are subsampled evenly in s.
    """
    if not 0.0 < alpha_h < 1.0:
        raise PreconditionError(f"alpha_h must lie in (0, 1), got {alpha_h}")
    n = f.grid.n_points
    idx = np.unique(np.linspace(0, n - 1, min(n, max_nodes)).round().astype(int))
    r = np.exp(-f.grid.nodes[idx])
    u = f.values[idx]

    rise = np.abs(np.subtract.outer(u, u))
    run = np.abs(np.subtract.outer(r, r))
    upper = np.triu_indices(idx.size, k=1)
    rise, run = rise[upper], run[upper]
    keep = run > 0.0
    if not np.any(keep):
        return 0.0
    return float(np.max(rise[keep] / run[keep] ** alpha_h))


def _restrict_to_unit_disk(f: RadialFunction) -> RadialFunction:
    s = f.grid.nodes
    k = int(np.searchsorted(s, 0.0, side="left"))
    if k == 0:
        return f
    if f.grid.n_points - k < 2:
        raise PreconditionError("grid has fewer than two nodes inside the unit disk")
    grid = LogGrid(s_min=float(s[k]), s_max=f.grid.s_max, n_points=f.grid.n_points - k)
    return RadialFunction(grid=grid, values=f.values[k:])


def log_inequality_probe(
    f: RadialFunction,
    lam: float,
    mu: float,
    alpha_h: float,
    on_unit_disk: bool = False,
) -> LogIneqReport:
    """Smallest C with ||u||_inf^2 <= lam N^2 log(C + K ||u||_C / N).

    On the whole plane N = ||u||_{H_mu}, K = 8^{alpha_h} mu^{-alpha_h} and the
    Holder norm is inhomogeneous. On the unit disk N = ||grad u||, K = 1 and
    the Holder seminorm is used. Any C >= 0 that works is reported as the
    nonnegative part of the solved value.
    """
    if not 0.0 < alpha_h < 1.0:
        raise PreconditionError(f"alpha_h must lie in (0, 1), got {alpha_h}")
    if not 0.0 < mu <= 1.0:
        raise PreconditionError(f"mu must lie in (0, 1], got {mu}")
    threshold = 1.0 / (2.0 * math.pi * alpha_h)
    if lam <= threshold:
        raise PreconditionError(f"lambda must exceed 1/(2 pi alpha_h) = {threshold:.6g}, got {lam}")

    if on_unit_disk:
        f = _restrict_to_unit_disk(f)
        energy = grad_l2_norm(f)
        holder = holder_seminorm(f, alpha_h)
        factor = 1.0
    else:
        energy = math.sqrt(grad_l2_norm(f) ** 2 + mu**2 * l2_norm_squared(f))
        holder = f.sup_norm + holder_seminorm(f, alpha_h)
        factor = 8.0**alpha_h * mu ** (-alpha_h)

    report = dict(
        lam=lam,
        mu=mu,
        alpha_h=alpha_h,
        sup_norm=f.sup_norm,
        energy_norm=energy,
        holder_norm=holder,
        on_unit_disk=on_unit_disk,
    )
    if energy == 0.0:
        return LogIneqReport(empirical_C=0.0, degenerate=True, **report)

    exponent = f.sup_norm**2 / (lam * energy**2)
    if exponent > 700.0:
        logger.warning("log inequality constant overflows (exponent %.6g)", exponent)
        return LogIneqReport(empirical_C=math.inf, **report)
    empirical = max(math.exp(exponent) - factor * holder / energy, 0.0)
    return LogIneqReport(empirical_C=empirical, **report)


def _crossing(a: np.ndarray, b: np.ndarray, eps: float, s0: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """Sub-interval of each cell where the linear interpolant of (a, b) is >= eps."""
    above_a, above_b = a >= eps, b >= eps
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = s0 + h * (eps - a) / (b - a)
    lo = np.where(above_a, s0, np.where(above_b, cross, s0))
    hi = np.where(above_b, s0 + h, np.where(above_a, cross, s0))
    return lo, hi


def superlevel_measure(f: RadialFunction, eps: float) -> float:
    """|{x : |u(x)| >= eps}| for the piecewise-linear interpolant in s, zero outside the grid."""
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    s = f.grid.nodes
    h = f.grid.ds
    a, b = f.values[:-1], f.values[1:]
    total = 0.0
    for sign in (1.0, -1.0):
        lo, hi = _crossing(sign * a, sign * b, eps, s[:-1], h)
        # pi (e^{-2 lo} - e^{-2 hi}), accurate for short intervals
        total += float(np.sum(-np.exp(-2.0 * lo) * np.expm1(-2.0 * (hi - lo))))
    return math.pi * total


def tchebychev_slack(f: RadialFunction, eps: float) -> float:
    """||u||_2^2 - eps^2 |{|u| >= eps}|, nonnegative."""
    return l2_norm_squared(f) - eps**2 * superlevel_measure(f, eps)


def bmo_average_closed_form(alpha: float) -> float:
    return math.sqrt(alpha) / (2.0 * math.sqrt(2.0 * math.pi)) + (-math.expm1(-alpha)) / (
        2.0 * math.sqrt(2.0 * math.pi * alpha)
    )


def bmo_probe(alpha: float, quad_tol: float = 1e-12) -> BMOProbeReport:
    """Averages of g_alpha = f_alpha e^{i theta} over B(0, e^{-alpha/2}).

    The angular factor integrates to zero, so the mean vanishes identically;
    the average modulus is radial and is integrated in s over [alpha/2, inf).
    """
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    height = math.sqrt(alpha / (2.0 * math.pi))
    opts = dict(epsabs=0.0, epsrel=quad_tol, limit=200)

    # ball area pi e^{-alpha}; integrand carries e^{alpha} so it stays O(1)
    cone, _ = quad(lambda s: height * (s / alpha) * math.exp(alpha - 2.0 * s), 0.5 * alpha, alpha, **opts)
    plateau = 0.5 * height * math.exp(-alpha)
    average = 2.0 * (cone + plateau)
    return BMOProbeReport(
        alpha=alpha, mean=0.0, average_modulus=average, closed_form=bmo_average_closed_form(alpha)
    )
