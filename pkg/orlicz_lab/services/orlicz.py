"""Trudinger-Moser functional and the Orlicz (Luxemburg) norm.

    ||u||_L = inf { lambda > 0 : int (e^{|u/lambda|^2} - 1) dx <= kappa }

The functional is strictly decreasing in lambda, so the norm is found by a
bracketed bisection seeded with ||u||_{L^2} / sqrt(kappa), which is always a
lower bound because e^x - 1 >= x.
"""
import logging
from typing import List, Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import gammaln

from orlicz_lab.core.exceptions import (
    ExponentOverflowError,
    NonConvergenceError,
    PreconditionError,
)
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import (
    MomentBoundRow,
    MoserProbeReport,
    OrliczConfig,
    SandwichReport,
)
from orlicz_lab.services import lions_family
from orlicz_lab.services.radial_core import TWO_PI, l2_norm, l2_norm_squared, lp_norm, sample_from_closure

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = OrliczConfig()


def tm_integral(
    f: RadialFunction, lam: float, cfg: Optional[OrliczConfig] = None
) -> float:
    """2 pi int (e^{(v/lambda)^2} - 1) e^{-2s} ds over the grid.

    Args:
        f: Sampled radial function.
        lam: Positive scaling parameter.
        cfg: Supplies the overflow cap.

    Returns:
        The value of the functional.

    Raises:
        ExponentOverflowError: if (v/lambda)^2 - 2s exceeds the cap at some node.
    """
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    cfg = cfg or DEFAULT_CONFIG
    if f.is_zero():
        return 0.0

    s = f.grid.nodes
    x = (f.values / lam) ** 2
    exponent = x - 2.0 * s
    worst = int(np.argmax(exponent))
    if exponent[worst] > cfg.overflow_exponent:
        raise ExponentOverflowError(float(s[worst]), float(exponent[worst]))

    weight = np.exp(-2.0 * s)
    with np.errstate(over="ignore", invalid="ignore"):
        # large x: combine exponents before exponentiating
        integrand = np.where(x > 1.0, np.exp(exponent) - weight, np.expm1(x) * weight)
    return TWO_PI * float(trapezoid(integrand, dx=f.grid.ds))


def _feasible(f: RadialFunction, lam: float, cfg: OrliczConfig) -> bool:
    try:
        return tm_integral(f, lam, cfg) <= cfg.kappa
    except ExponentOverflowError:
        return False


def orlicz_norm(f: RadialFunction, cfg: Optional[OrliczConfig] = None) -> float:
    """Smallest feasible lambda, up to the relative bisection tolerance.

    The returned value is always feasible.

    Raises:
        NonConvergenceError: if no bracket is found within ``max_doublings``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if f.is_zero():
        return 0.0

    seed = l2_norm(f) / np.sqrt(cfg.kappa)
    if seed <= 0.0:
        # mass only where e^{-2s} underflows
        seed = f.sup_norm

    if _feasible(f, seed, cfg):
        hi, lo = seed, seed
        for _ in range(cfg.max_doublings):
            lo = 0.5 * hi
            if not _feasible(f, lo, cfg):
                break
            hi = lo
        else:
            return hi
    else:
        lo, hi = seed, 2.0 * seed
        for _ in range(cfg.max_doublings):
            if _feasible(f, hi, cfg):
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise NonConvergenceError(
                f"no feasible lambda below {hi:.6g} after {cfg.max_doublings} doublings"
            )

    logger.debug("bracket [%.12g, %.12g]", lo, hi)
    while hi - lo > cfg.bisect_tol * hi:
        mid = 0.5 * (lo + hi)
        if _feasible(f, mid, cfg):
            hi = mid
        else:
            lo = mid
    return hi


def moser_ratio_probe(
    alpha_exp: float,
    beta: float,
    cfg: Optional[OrliczConfig] = None,
    ds: float = 0.01,
) -> MoserProbeReport:
    """int (e^{alpha_exp f_beta^2} - 1) dx / ||f_beta||_{L^2}^2.

    ||grad f_beta|| = 1, so the ratio stays bounded in beta exactly when
    alpha_exp < 4 pi.
    """
    if alpha_exp <= 0 or beta <= 0:
        raise PreconditionError("alpha_exp and beta must be positive")
    grid = LogGrid.from_spacing(-2.0, max(4.0 * beta, 50.0), ds)
    f = sample_from_closure(lions_family.lions_f(beta), grid)
    integral = tm_integral(f, 1.0 / np.sqrt(alpha_exp), cfg)
    ratio = integral / l2_norm_squared(f)
    return MoserProbeReport(alpha_exp=alpha_exp, beta=beta, integral=integral, ratio=ratio)


def orlicz_l2_sandwich_check(
    f: RadialFunction, mu: float, cfg: Optional[OrliczConfig] = None
) -> SandwichReport:
    """||u||_2/sqrt(kappa) <= ||u||_L <= mu + e^{||u||_inf^2/(2 mu^2)} ||u||_2/sqrt(kappa)."""
    if not 0.0 < mu <= 1.0:
        raise PreconditionError(f"mu must lie in (0, 1], got {mu}")
    cfg = cfg or DEFAULT_CONFIG
    l2 = l2_norm(f)
    orl = orlicz_norm(f, cfg)
    lower = l2 / np.sqrt(cfg.kappa)

    exponent = f.sup_norm**2 / (2.0 * mu**2)
    if exponent > cfg.overflow_exponent:
        logger.warning("sandwich upper bound overflows (exponent %.6g)", exponent)
        return SandwichReport(
            l2=l2,
            orlicz=orl,
            lower_bound=lower,
            lower_slack=orl - lower,
            upper_unbounded=True,
        )
    upper = mu + np.exp(exponent) * lower
    return SandwichReport(
        l2=l2,
        orlicz=orl,
        lower_bound=lower,
        upper_bound=float(upper),
        lower_slack=orl - lower,
        upper_slack=float(upper - orl),
    )


def lp_moment_bound_check(
    f: RadialFunction, q_max: int, cfg: Optional[OrliczConfig] = None
) -> List[MomentBoundRow]:
    """||u||_{L^{2q}} <= kappa^{1/2q} (q!)^{1/2q} ||u||_L for q = 1..q_max."""
    if q_max < 1:
        raise PreconditionError(f"q_max must be at least 1, got {q_max}")
    cfg = cfg or DEFAULT_CONFIG
    orl = orlicz_norm(f, cfg)
    rows = []
    for q in range(1, q_max + 1):
        norm = lp_norm(f, 2.0 * q)
        bound = np.exp((np.log(cfg.kappa) + gammaln(q + 1.0)) / (2.0 * q)) * orl
        rows.append(MomentBoundRow(q=q, norm=norm, bound=float(bound), slack=float(bound - norm)))
    return rows
