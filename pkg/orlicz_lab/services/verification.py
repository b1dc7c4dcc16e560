"""Acceptance suite: finite-parameter reproductions of the limit statements.

Each criterion is a function returning ``(success, metrics, detail)``; the
runner times it and wraps the result in a ``CriterionOutcome``.
"""
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from orlicz_lab.core.config import Settings, get_settings
from orlicz_lab.core.exceptions import ConfigurationError, OrliczLabError
from orlicz_lab.db.session import make_session_factory, session_scope
from orlicz_lab.schemas.decomposition import ExtractionConfig
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.profile import Profile
from orlicz_lab.schemas.run import CriterionOutcome, VerificationRunCreate
from orlicz_lab.schemas.wave import EvolutionMode, RGrid
from orlicz_lab.services import (
    asymptotics,
    decomposition,
    inequalities,
    klein_gordon,
    ledger,
    lions_family,
    orlicz,
)
from orlicz_lab.services.radial_core import grad_l2_norm, l2_norm_squared, sample_from_closure

logger = logging.getLogger(__name__)

Check = Callable[[Settings, int], Tuple[bool, Dict[str, object], str]]

CRITERIA: Dict[str, Check] = {}

WAVE_ENERGY = 0.3
WAVE_ALPHAS = (2.0, 4.0, 6.0)


def criterion(name: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        CRITERIA[name] = fn
        return fn

    return register


def _ocfg(settings: Settings) -> OrliczConfig:
    return OrliczConfig(kappa=settings.kappa)


def random_radial_function(
    rng: np.random.Generator, ds: float = 1.0 / 32.0, t_max: float = 2.0
) -> RadialFunction:
    """A random bubble sqrt(alpha/2pi) psi(s/alpha) with a piecewise-linear psi."""
    k = int(rng.integers(2, 7))
    knots = np.concatenate([[0.0], np.sort(rng.uniform(0.0, t_max, k))])
    heights = np.concatenate([[0.0], rng.normal(0.0, 0.6, k)])
    alpha = float(rng.uniform(1.0, 8.0))
    psi = Profile.from_function(lambda t: np.interp(t, knots, heights), t_max, 257)
    grid = LogGrid.from_spacing(-2.0, alpha * t_max + 10.0, ds)
    return sample_from_closure(lions_family.BubbleFunction(alpha, psi), grid)


@criterion("orlicz-limit")
def check_orlicz_limit(settings: Settings, jobs: int):
    alphas = [10.0, 20.0, 40.0, 80.0]
    report = asymptotics.orlicz_limit_sweep(alphas, _ocfg(settings), settings.sweep_ds, jobs)
    errors = [abs(x / asymptotics.LIMIT - 1.0) for x in report.observed]
    within = all(e <= 3.0 / a for e, a in zip(errors, alphas))
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    return within and decreasing, {"alphas": alphas, "relative_errors": errors}, ""


@criterion("small-alpha")
def check_small_alpha(settings: Settings, jobs: int):
    alphas = [0.05, 0.1, 0.2]
    report = asymptotics.orlicz_limit_sweep(alphas, _ocfg(settings), settings.sweep_ds, jobs)
    return asymptotics.small_alpha_bound_holds(report), {"alphas": alphas, "norms": report.observed}, ""


@criterion("closed-form")
def check_closed_form(settings: Settings, jobs: int):
    metrics = {}
    ok = True
    for alpha in (1.0, 5.0, 25.0):
        # kinks at s = 0 and s = alpha are nodes
        f = sample_from_closure(lions_family.lions_f(alpha), lions_family.family_grid(alpha, 1.0 / 1024.0))
        exact = lions_family.lions_l2_closed_form(alpha)
        l2_err = abs(l2_norm_squared(f) - exact) / exact
        grad_err = abs(grad_l2_norm(f) - lions_family.lions_grad_closed_form(alpha))
        metrics[f"alpha={alpha:g}"] = {"l2_relative_error": l2_err, "grad_error": grad_err}
        ok = ok and l2_err <= 1e-6 and grad_err <= 1e-3
    return ok, metrics, ""


@criterion("tail-integrals")
def check_tail_integrals(settings: Settings, jobs: int):
    alphas = [25.0, 50.0, 100.0]
    values = [asymptotics.tail_integrals(a) for a in alphas]
    dist_I = [abs(I - 1.0) for I, _ in values]
    dist_J = [abs(J - 1.0 / 3.0) for _, J in values]
    ok = (
        dist_I[-1] <= 0.05
        and dist_J[-1] <= 0.02
        and all(b < a for a, b in zip(dist_I, dist_I[1:]))
        and all(b < a for a, b in zip(dist_J, dist_J[1:]))
    )
    return ok, {"alphas": alphas, "I": [v[0] for v in values], "J": [v[1] for v in values]}, ""


@criterion("concentration")
def check_concentration(settings: Settings, jobs: int):
    gaussian = lambda r: math.exp(-r * r)
    grad = asymptotics.dirac_test(100.0, gaussian, "gradient")
    expo = asymptotics.dirac_test(100.0, gaussian, "exponential")
    ok = abs(grad - 1.0) <= 0.05 and abs(expo - 2.0 * math.pi) <= 0.1 * 2.0 * math.pi
    return ok, {"gradient": grad, "exponential": expo}, ""


@criterion("moser-sharpness")
def check_moser_sharpness(settings: Settings, jobs: int):
    betas = [5.0, 10.0, 20.0, 40.0]
    sub = [orlicz.moser_ratio_probe(2.0 * math.pi, b).ratio for b in betas]
    critical = [orlicz.moser_ratio_probe(4.0 * math.pi, b).ratio for b in betas]
    ok = max(sub) / min(sub) < 3.0 and critical[-1] > 5.0 * critical[0]
    return ok, {"betas": betas, "ratio_2pi": sub, "ratio_4pi": critical}, ""


@criterion("max-law")
def check_max_law(settings: Settings, jobs: int):
    alphas = [8.0, 16.0, 32.0]
    metrics = {}
    ok = True
    for a, b in ((1.0, 2.0), (2.0, 1.0), (1.0, 1.0)):
        report = asymptotics.sum_orlicz_max_check(a, b, alphas, _ocfg(settings), settings.sweep_ds, jobs)
        ratios = [x / report.target for x in report.observed]
        metrics[f"({a:g},{b:g})"] = ratios
        ok = (
            ok
            and 0.85 <= ratios[0] <= 1.0 + 1.5 / math.sqrt(alphas[0])
            and all(y < x for x, y in zip(ratios, ratios[1:]))
        )
    return ok, metrics, ""


@criterion("stability")
def check_stability(settings: Settings, jobs: int):
    cfg = ExtractionConfig()
    ocfg = _ocfg(settings)

    single = decomposition.synthetic_sequence([(1.0, 1.0, 1.0)], [50, 55, 60])
    result = decomposition.decompose(single, cfg, ocfg, jobs)
    grad = result.bubbles[0].grad_norm if result.levels else 0.0
    ok_single = (
        result.levels == 1
        and 0.9 <= grad <= 1.1
        and result.stability_defect[-1] < 0.05 * result.grad_sq
        and result.remainder_orlicz[-1] < 0.05 * result.a0_estimate
    )

    orth = decomposition.synthetic_sequence([(1.0, 1.0, 1.0), (1.0, 1.0, 2.0)], [36, 38, 40])
    two = decomposition.decompose(orth, cfg, ocfg, jobs)
    margin = (
        decomposition.check_orthogonality(two.bubbles[0].scales, two.bubbles[1].scales).margin
        if two.levels == 2
        else 0.0
    )
    ok_orth = two.levels == 2 and margin >= 2.0

    merged = decomposition.decompose(
        decomposition.synthetic_sequence([(1.0, 1.0, 1.0), (1.0, 2.0, 1.0)], [36, 38, 40]), cfg, ocfg, jobs
    )
    gk = lions_family.gk_profile().grad_norm
    merged_grad = merged.bubbles[0].grad_norm if merged.levels else 0.0
    ok_merged = merged.levels == 1 and abs(merged_grad - gk) <= 0.1 * gk

    metrics = {
        "single_grad_norm": grad,
        "orthogonal_levels": two.levels,
        "orthogonal_margin": margin,
        "merged_levels": merged.levels,
        "merged_grad_norm": merged_grad,
    }
    return ok_single and ok_orth and ok_merged, metrics, ""


@criterion("bmo")
def check_bmo(settings: Settings, jobs: int):
    errors = {f"{a:.6g}": inequalities.bmo_probe(a).relative_error for a in (1.0, 2.0 * math.pi, 10.0)}
    growth = inequalities.bmo_probe(20.0).average_modulus / inequalities.bmo_probe(10.0).average_modulus
    n10 = asymptotics.lions_orlicz_norm(10.0, _ocfg(settings), settings.sweep_ds)
    n20 = asymptotics.lions_orlicz_norm(20.0, _ocfg(settings), settings.sweep_ds)
    change = abs(n20 / n10 - 1.0)
    ok = max(errors.values()) <= 1e-6 and growth >= 1.3 and change < 0.05
    return ok, {"relative_errors": errors, "growth": growth, "orlicz_change": change}, ""


@criterion("wave")
def check_wave(settings: Settings, jobs: int):
    grid = RGrid(R=2.5, n_r=4096)
    smooth = klein_gordon.bump_data(1.0, 0.3)
    linear = klein_gordon.evolve(smooth, grid, 1.0, mode=EvolutionMode.LINEAR)
    nonlinear = klein_gordon.evolve(smooth, grid, 1.0, mode=EvolutionMode.NONLINEAR)

    final = linear.final
    ahead = grid.nodes > 1.0 + final.time + 2.0 * grid.dr
    leakage = float(np.max(np.abs(final.u[ahead]))) if np.any(ahead) else 0.0

    by_size = [klein_gordon.kinetic_gap(klein_gordon.lions_data(c, 4.0), 1.0, grid) for c in (0.4, 0.2, 0.1)]
    # common subcritical energy; alpha stays where dr resolves the core
    scaled = [klein_gordon.lions_data_at_energy(a, grid, WAVE_ENERGY) for a in WAVE_ALPHAS]
    energy_error = max(abs(klein_gordon.initial_energy(d, grid) - WAVE_ENERGY) for d in scaled)
    by_scale = [klein_gordon.kinetic_gap(d, 1.0, grid) for d in scaled]

    ok = (
        linear.energy_drift() < 1e-3
        and nonlinear.energy_drift() < 1e-2
        and leakage < 1e-12
        and energy_error < 1e-8 * WAVE_ENERGY
        and all(b < a for a, b in zip(by_size, by_size[1:]))
        and all(b < a for a, b in zip(by_scale, by_scale[1:]))
    )
    metrics = {
        "linear_drift": linear.energy_drift(),
        "nonlinear_drift": nonlinear.energy_drift(),
        "leakage": leakage,
        "energy_error": energy_error,
        "gap_by_size": by_size,
        "gap_by_scale": by_scale,
    }
    return ok, metrics, ""


@criterion("properties")
def check_properties(settings: Settings, jobs: int, draws: int = 100):
    rng = np.random.default_rng(settings.seed)
    ocfg = _ocfg(settings)
    tol = 4.0 * ocfg.bisect_tol
    failures: Dict[str, int] = {}

    def fail(name: str) -> None:
        failures[name] = failures.get(name, 0) + 1

    for _ in range(draws):
        f = random_radial_function(rng)
        g = random_radial_function(rng)
        g = RadialFunction(grid=f.grid, values=np.interp(f.grid.nodes, g.grid.nodes, g.values, right=0.0))
        nf, ng = orlicz.orlicz_norm(f, ocfg), orlicz.orlicz_norm(g, ocfg)

        c = float(rng.uniform(-3.0, 3.0))
        if abs(orlicz.orlicz_norm(c * f, ocfg) - abs(c) * nf) > tol * max(abs(c) * nf, 1e-300):
            fail("homogeneity")
        shrunk = RadialFunction(grid=f.grid, values=f.values * rng.uniform(0.0, 1.0, f.grid.n_points))
        if orlicz.orlicz_norm(shrunk, ocfg) > nf * (1.0 + tol):
            fail("monotonicity")
        if orlicz.orlicz_norm(f + g, ocfg) > (nf + ng) * (1.0 + tol):
            fail("triangle")
        if not orlicz.orlicz_l2_sandwich_check(f, 0.5, ocfg).holds:
            fail("sandwich")
        if not all(row.holds for row in orlicz.lp_moment_bound_check(f, 6, ocfg)):
            fail("moments")
        if not inequalities.radial_bound_check(f, 2.0).holds:
            fail("radial-decay")
        eps = float(rng.uniform(0.05, 1.0)) * max(f.sup_norm, 1e-12)
        if inequalities.tchebychev_slack(f, eps) < -1e-12:
            fail("tchebychev")

    return not failures, {"draws": draws, "failures": failures}, ""


def _run_one(name: str, settings: Settings, jobs: int) -> CriterionOutcome:
    start = time.perf_counter()
    try:
        success, metrics, detail = CRITERIA[name](settings, jobs)
    except OrliczLabError as exc:
        success, metrics, detail = False, {}, f"{type(exc).__name__}: {exc}"
    runtime = time.perf_counter() - start
    logger.info("criterion %s %s in %.2fs", name, "passed" if success else "FAILED", runtime)
    return CriterionOutcome(name=name, success=bool(success), runtime=runtime, metrics=metrics, detail=detail)


def run_suite(
    names: Optional[Sequence[str]] = None,
    settings: Optional[Settings] = None,
    jobs: Optional[int] = None,
    ledger_url: Optional[str] = None,
) -> List[CriterionOutcome]:
    """Run the selected criteria in registry order and optionally record them.

    Raises:
        ConfigurationError: on an unknown criterion name.
    """
    settings = settings or get_settings()
    jobs = jobs or settings.jobs
    selected = list(CRITERIA) if not names else list(names)
    unknown = [n for n in selected if n not in CRITERIA]
    if unknown:
        raise ConfigurationError(f"unknown criteria {unknown}; choose from {sorted(CRITERIA)}")

    outcomes = [_run_one(name, settings, jobs) for name in selected]

    url = ledger_url or settings.ledger_url
    if url:
        factory = make_session_factory(url)
        with session_scope(factory) as db:
            run = ledger.create_run(
                db,
                VerificationRunCreate(
                    seed=settings.seed,
                    settings_snapshot=settings.model_dump(include={"sweep_ds", "kappa", "jobs", "seed"}),
                ),
            )
            ledger.record_outcomes(db, run.id, outcomes)
    return outcomes
