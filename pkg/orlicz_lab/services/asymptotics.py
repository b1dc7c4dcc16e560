"""Finite-parameter checks of the limits satisfied by the concentration families.

Integrals with e^{c log^2 r} weights are evaluated after completing the square
in s = -log r, so every quadrature integrand is bounded by 1.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad, trapezoid
from scipy.special import dawsn

from orlicz_lab.core.concurrency import ordered_map
from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.schemas.grid import LogGrid
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.profile import Profile, ScaledBubble
from orlicz_lab.schemas.trend import ProfileBoundsReport, TrendReport
from orlicz_lab.services import lions_family
from orlicz_lab.services.orlicz import moser_ratio_probe, orlicz_norm
from orlicz_lab.services.radial_core import sample_from_closure

logger = logging.getLogger(__name__)

LIMIT = 1.0 / math.sqrt(4.0 * math.pi)
DEFAULT_DS = 1.0 / 64.0
# Below this alpha (or for kappa < 1) the embedding bound is not certified
EMBEDDING_MIN_ALPHA = 8.0


def _trend(
    quantity: str,
    parameters: Sequence[float],
    observed: Sequence[float],
    target: float,
    tol: Optional[float] = None,
    min_rate: Optional[float] = None,
    **extra,
) -> TrendReport:
    """Build a TrendReport, judging convergence on the last three points."""
    obs = np.asarray(observed, dtype=float)
    par = np.asarray(parameters, dtype=float)
    tail = slice(max(len(obs) - 3, 0), len(obs))

    if math.isinf(target):
        steps = np.diff(obs[tail])
        monotone = bool(np.all(steps > 0))
        rate = None
        if len(obs) >= 2 and obs[-2] > 0 and obs[-1] > 0:
            rate = math.log(obs[-1] / obs[-2]) / math.log(par[-1] / par[-2])
        converged = monotone and len(obs) >= 2
    else:
        err = np.abs(obs - target)
        monotone = bool(np.all(np.diff(err[tail]) <= 0))
        rate = None
        if len(err) >= 2 and err[-1] > 0 and err[-2] > 0:
            rate = math.log(err[-2] / err[-1]) / math.log(par[-1] / par[-2])
        if not np.any(err):
            converged = True
        else:
            converged = monotone
            if tol is not None:
                converged = converged and err[-1] <= tol
            if min_rate is not None:
                converged = converged and rate is not None and rate >= min_rate

    if not monotone:
        logger.warning("%s: sampled tail is not monotone", quantity or "trend")
    return TrendReport(
        quantity=quantity,
        parameters=list(par),
        observed=list(obs),
        target=target,
        converged=converged,
        rate_estimate=rate,
        monotone_tail=monotone,
        **extra,
    )


def _check_increasing(values: Sequence[float], name: str) -> None:
    if not values:
        raise PreconditionError(f"{name} must not be empty")
    if any(v <= 0 for v in values):
        raise PreconditionError(f"{name} must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise PreconditionError(f"{name} must be strictly increasing")


def orlicz_bracket(alpha: float, kappa: float = 1.0) -> Tuple[float, float]:
    """Two-sided bounds on ||f_alpha||_L.

    The lower bound comes from the plateau r <= e^{-alpha} alone and holds for
    every alpha. The upper one is the embedding H^1 -> L with constant
    1/sqrt(4 pi), whose modular bound is the Moser-Trudinger supremum rather
    than kappa; it is reported only for alpha >= EMBEDDING_MIN_ALPHA and
    kappa >= 1, and is math.inf otherwise.
    """
    log_term = np.logaddexp(0.0, math.log(kappa) + 2.0 * alpha - math.log(math.pi))
    lower = math.sqrt(alpha / (2.0 * math.pi * log_term))
    if alpha < EMBEDDING_MIN_ALPHA or kappa < 1.0:
        return lower, math.inf
    upper = LIMIT * (1.0 + math.sqrt(lions_family.lions_l2_closed_form(alpha)))
    return lower, upper


def lions_orlicz_norm(alpha: float, cfg: Optional[OrliczConfig] = None, ds: float = DEFAULT_DS) -> float:
    step = min(ds, alpha / 64.0)
    grid = lions_family.family_grid(alpha, step)
    return orlicz_norm(sample_from_closure(lions_family.lions_f(alpha), grid), cfg)


def orlicz_limit_sweep(
    alphas: Sequence[float],
    cfg: Optional[OrliczConfig] = None,
    ds: float = DEFAULT_DS,
    jobs: int = 1,
) -> TrendReport:
    """||f_alpha||_L along alphas, with the per-alpha bracket.

    Args:
        alphas: Increasing positive parameters.
        cfg: Orlicz norm configuration.
        ds: Largest log-grid spacing; small alphas get alpha/64.
        jobs: Worker threads.

    Returns:
        Trend towards 1/sqrt(4 pi), converged when the relative error is
        below 3/alpha at the largest alpha.
    """
    _check_increasing(list(alphas), "alphas")
    cfg = cfg or OrliczConfig()
    values = ordered_map(lambda a: lions_orlicz_norm(a, cfg, ds), alphas, jobs)
    brackets = [orlicz_bracket(a, cfg.kappa) for a in alphas]
    return _trend(
        "orlicz_norm_lions",
        alphas,
        values,
        LIMIT,
        tol=3.0 * LIMIT / alphas[-1],
        lower=[b[0] for b in brackets],
        upper=[b[1] for b in brackets],
    )


def small_alpha_bound_holds(report: TrendReport) -> bool:
    """||f_alpha||_L <= alpha^{1/4} wherever alpha < 1."""
    return all(
        x <= a**0.25 for a, x in zip(report.parameters, report.observed) if a < 1.0
    )


def tail_integrals(
    alpha: float, quad_tol: float = 1e-10, closed_form: bool = False
) -> Tuple[float, float]:
    """I_alpha = int_{e^-alpha}^1 r e^{(2/alpha) log^2 r} dr and J_alpha (weight r^2).

    With A = sqrt(alpha/2),
        I_alpha = 2A int_0^A e^{y^2 - A^2} dy
        J_alpha = A int_{-3A/2}^{A/2} e^{y^2 - 9A^2/4} dy
    which tend to 1 and 1/3.
    """
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    A = math.sqrt(alpha / 2.0)
    if closed_form:
        I = 2.0 * A * dawsn(A)
        J = A * dawsn(1.5 * A) + A * math.exp(-2.0 * A * A) * dawsn(0.5 * A)
        return float(I), float(J)

    opts = dict(epsabs=0.0, epsrel=quad_tol, limit=200)
    i_part, _ = quad(lambda y: math.exp(y * y - A * A), 0.0, A, **opts)
    j_part, _ = quad(lambda y: math.exp(y * y - 2.25 * A * A), -1.5 * A, 0.5 * A, **opts)
    return 2.0 * A * i_part, A * j_part


def raw_tail_integrals(alpha: float, quad_tol: float = 1e-10) -> Tuple[float, float]:
    """Same integrals in the raw r variable; usable for small alpha only."""
    if not 0 < alpha <= 50:
        raise PreconditionError("raw-variable quadrature is limited to 0 < alpha <= 50")
    weight = lambda r: math.exp((2.0 / alpha) * math.log(r) ** 2)
    lo = math.exp(-alpha)
    opts = dict(epsabs=0.0, epsrel=quad_tol, limit=400)
    I, _ = quad(lambda r: r * weight(r), lo, 1.0, **opts)
    J, _ = quad(lambda r: r * r * weight(r), lo, 1.0, **opts)
    return I, J


def pq_integral(
    p: float, q: float, alpha: float, quad_tol: float = 1e-10, closed_form: bool = False
) -> float:
    """e^{p alpha} int_{e^{-alpha^2}}^{e^{-alpha}} e^{q log^2 r / alpha^2} r dr.

    With y = (sqrt(q)/alpha)(s - alpha^2/q) the integrand becomes e^{y^2}
    over [sqrt(q) - alpha/sqrt(q), alpha (q-1)/sqrt(q)].
    """
    if not (0.0 < p < 2.0 and 0.0 < q < 2.0):
        raise PreconditionError(f"p and q must lie in (0, 2), got ({p}, {q})")
    if alpha <= 1.0:
        raise PreconditionError(f"alpha must exceed 1, got {alpha}")
    rq = math.sqrt(q)
    ya = rq - alpha / rq
    yb = alpha * (q - 1.0) / rq
    base = p * alpha - alpha * alpha / q
    prefactor = alpha / rq

    if closed_form:
        # int_0^y e^{t^2} dt = e^{y^2} D(y)
        hi = math.exp(base + yb * yb) * dawsn(yb)
        lo = math.exp(base + ya * ya) * dawsn(ya)
        return float(prefactor * (hi - lo))

    peak = max(ya * ya, yb * yb)
    integral, _ = quad(
        lambda y: math.exp(y * y - peak), ya, yb, epsabs=0.0, epsrel=quad_tol, limit=400
    )
    return float(prefactor * math.exp(base + peak) * integral)


def pq_bound(p: float, q: float, alpha: float) -> float:
    return math.exp(p * alpha + (q - 2.0) * alpha * alpha) + math.exp((p - 2.0) * alpha + q)


def dirac_test(
    alpha: float,
    phi: Callable[[float], float],
    kind: str = "gradient",
    quad_tol: float = 1e-10,
) -> float:
    """Pair the concentrating densities of f_alpha with a radial test function.

    kind="gradient":    int |grad f_alpha|^2 phi dx      -> phi(0)
    kind="exponential": int (e^{4 pi f_alpha^2} - 1) phi dx -> 2 pi phi(0)
    """
    if alpha <= 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    opts = dict(epsabs=1e-14, epsrel=quad_tol, limit=400)
    test = lambda s: float(phi(math.exp(-s)))

    if kind == "gradient":
        # |grad f|^2 = 1/(2 pi alpha r^2) on the annulus e^{-alpha} < r < 1
        half = 0.5 * alpha
        a, _ = quad(test, 0.0, half, **opts)
        b, _ = quad(test, half, alpha, **opts)
        return (a + b) / alpha

    if kind == "exponential":
        cone = lambda s: (math.exp(2.0 * s * s / alpha - 2.0 * s) - math.exp(-2.0 * s)) * test(s)
        plateau = lambda s: (math.exp(2.0 * alpha - 2.0 * s) - math.exp(-2.0 * s)) * test(s)
        half = 0.5 * alpha
        a, _ = quad(cone, 0.0, half, **opts)
        b, _ = quad(cone, half, alpha, **opts)
        c, _ = quad(plateau, alpha, math.inf, **opts)
        return 2.0 * math.pi * (a + b + c)

    raise PreconditionError(f"unknown dirac test kind {kind!r}")


def profile_norm_bounds(
    psi: Profile,
    alphas: Sequence[float],
    cfg: Optional[OrliczConfig] = None,
    tol: float = 0.05,
    ds: float = DEFAULT_DS,
) -> ProfileBoundsReport:
    """sup|psi(t)|/sqrt(4 pi t) <= lim ||g_alpha||_L <= ||psi'||/sqrt(4 pi)."""
    _check_increasing(list(alphas), "alphas")
    lower = psi.sup_ratio() * LIMIT
    upper = psi.grad_norm * LIMIT

    observed: List[float] = []
    for alpha in alphas:
        grid = LogGrid.from_spacing(-2.0, max(alpha * psi.t_max, 50.0), ds)
        bubble = ScaledBubble(scale_at=lions_family.constant_scale(alpha), profile=psi)
        observed.append(orlicz_norm(lions_family.bubble_to_function(bubble, 0, grid), cfg))

    trend = _trend("orlicz_norm_bubble", alphas, observed, lower, tol=tol * max(lower, 1e-300))
    last = observed[-1]
    within = lower * (1.0 - tol) <= last <= upper * (1.0 + tol)
    return ProfileBoundsReport(lower=lower, upper=upper, trend=trend, within=within)


def sum_orlicz_max_check(
    a: float,
    b: float,
    alphas: Sequence[float],
    cfg: Optional[OrliczConfig] = None,
    ds: float = DEFAULT_DS,
    jobs: int = 1,
) -> TrendReport:
    """||a f_alpha + b f_{alpha^2}||_L along alphas, target max(|a|,|b|)/sqrt(4 pi).

    The interaction between the two bubbles decays like alpha^{-1/2}; the
    report is converged when the relative error is below 1.5/sqrt(alpha) at
    the largest alpha.
    """
    _check_increasing(list(alphas), "alphas")
    if alphas[0] < 2:
        raise PreconditionError("sum_orlicz_max_check needs alpha >= 2")

    def norm_at(alpha: float) -> float:
        grid = LogGrid.from_spacing(-2.0, max(4.0 * alpha * alpha, 50.0), ds)
        return orlicz_norm(sample_from_closure(lions_family.sum_h(a, b, alpha), grid), cfg)

    target = max(abs(a), abs(b)) * LIMIT
    values = ordered_map(norm_at, alphas, jobs)
    return _trend(
        "orlicz_norm_sum",
        alphas,
        values,
        target,
        tol=1.5 * target / math.sqrt(alphas[-1]),
    )


def cross_scale_vanishing(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    alpha_n: Callable[[int], float],
    beta_n: Callable[[int], float],
    n_list: Sequence[int],
    t_max: float = 4.0,
    n_samples: int = 20001,
) -> TrendReport:
    """int (alpha_n beta_n)^{-1/2} f(s/alpha_n) g(s/beta_n) ds along n.

    f and g vanish for t <= 0 and beyond t_max.
    """
    _check_increasing(list(n_list), "n_list")
    values = []
    for n in n_list:
        a, b = float(alpha_n(n)), float(beta_n(n))
        s = np.linspace(0.0, t_max * max(a, b), n_samples)
        integrand = np.asarray(f(s / a)) * np.asarray(g(s / b))
        values.append(float(trapezoid(integrand, s)) / math.sqrt(a * b))
    return _trend("cross_scale_inner_product", n_list, values, 0.0, min_rate=0.1)


def moser_ratio_sweep(
    alpha_exp: float,
    betas: Sequence[float],
    cfg: Optional[OrliczConfig] = None,
    jobs: int = 1,
) -> TrendReport:
    """Moser ratios along beta.

    From 4 pi on the target is divergence. Below it the ratio must stay
    bounded, judged as max/min < 3, and the target column carries that
    threshold 3 min.
    """
    _check_increasing(list(betas), "betas")
    ratios = ordered_map(lambda b: moser_ratio_probe(alpha_exp, b, cfg).ratio, betas, jobs)
    # 4 pi typed to a few digits still counts as critical
    if alpha_exp >= 4.0 * math.pi * (1.0 - 1e-4):
        return _trend("moser_ratio", betas, ratios, math.inf)
    threshold = 3.0 * min(ratios)
    return TrendReport(
        quantity="moser_ratio",
        parameters=list(betas),
        observed=list(ratios),
        target=threshold,
        converged=max(ratios) < threshold,
    )


def dirac_sweep(
    alphas: Sequence[float], phi: Callable[[float], float], kind: str = "gradient"
) -> TrendReport:
    """dirac_test along alphas; targets phi(0) or 2 pi phi(0)."""
    _check_increasing(list(alphas), "alphas")
    target = float(phi(0.0)) * (1.0 if kind == "gradient" else 2.0 * math.pi)
    values = [dirac_test(a, phi, kind) for a in alphas]
    return _trend(f"dirac_{kind}", alphas, values, target)
