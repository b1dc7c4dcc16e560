"""Scale-and-profile extraction for bounded radial sequences.

Each level estimates the remainder amplitude A = limsup ||r_n||_L, detects a
scale alpha_n as the leftmost maximiser of W_n(s) = 4 |v_n(s)/A|^2 - s, reads
the remainder in the frame psi_n(t) = sqrt(2 pi/alpha_n) v_n(alpha_n t),
averages the frame derivatives over the reference indices and subtracts the
resulting bubble. The trailing indices of the sequence play the role of
n -> infinity.

The profile frame is a fixed uniform t-grid: structure narrower than one frame
cell belongs to a different scale and is left for a later level.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from orlicz_lab.core.concurrency import ordered_map
from orlicz_lab.core.exceptions import ConfigurationError, PreconditionError, StagnationError
from orlicz_lab.schemas.decomposition import (
    BubbleRecord,
    CompactnessReport,
    DecompositionResult,
    ExtractionConfig,
    OrthogonalityReport,
    RadialSequence,
    ScaleDetection,
)
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.profile import Profile
from orlicz_lab.services import lions_family
from orlicz_lab.services.orlicz import orlicz_norm
from orlicz_lab.services.radial_core import TWO_PI, grad_l2_norm, l2_norm, sample_from_closure, tail_l2_mass

logger = logging.getLogger(__name__)

# (coefficient, multiplier, power): the term coefficient * f_{multiplier * n^power}
Term = Tuple[float, float, float]


def sequence_grid(max_scale: float, ds: float = 0.05, s_min: float = -2.0) -> LogGrid:
    return LogGrid.from_spacing(s_min, 1.5 * max_scale + 50.0, ds)


def synthetic_sequence(
    terms: Sequence[Term], n_range: Sequence[int], grid: Optional[LogGrid] = None
) -> RadialSequence:
    """u_n = sum_k c_k f_{m_k n^{p_k}} on a grid wide enough for every scale."""
    if not terms:
        raise PreconditionError("a synthetic sequence needs at least one term")
    n_max = max(n_range)
    if grid is None:
        grid = sequence_grid(max(m * n_max**p for _, m, p in terms))

    def generate(n: int) -> RadialFunction:
        closure = lions_family.LinearCombination(
            [(c, lions_family.lions_f(m * n**p)) for c, m, p in terms]
        )
        return sample_from_closure(closure, grid)

    return RadialSequence(generator=generate, n_range=list(n_range), grid=grid)


def _window(cfg: ExtractionConfig, seq: RadialSequence) -> List[int]:
    try:
        return cfg.window(seq.n_range)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc


def _reference(cfg: ExtractionConfig, seq: RadialSequence) -> List[int]:
    try:
        return cfg.reference(seq.n_range)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc


def _amplitude(
    functions: Dict[int, RadialFunction], indices: Sequence[int], ocfg: OrliczConfig, jobs: int = 1
) -> float:
    norms = ordered_map(lambda n: orlicz_norm(functions[n], ocfg), indices, jobs)
    return float(max(norms))


def estimate_A0(
    seq: RadialSequence,
    cfg: Optional[ExtractionConfig] = None,
    ocfg: Optional[OrliczConfig] = None,
    jobs: int = 1,
) -> float:
    """Largest Orlicz norm over the trailing ``a0_window`` indices."""
    cfg = cfg or ExtractionConfig()
    ocfg = ocfg or OrliczConfig()
    window = _window(cfg, seq)
    return _amplitude({n: seq.at(n) for n in window}, window, ocfg, jobs)


def detect_scale(f_n: RadialFunction, A0: float) -> ScaleDetection:
    """Leftmost grid maximiser over s > 0 of W(s) = 4 |v(s)/A0|^2 - s."""
    if A0 <= 0:
        raise PreconditionError(f"A0 must be positive, got {A0}")
    s = f_n.grid.nodes
    positive = np.flatnonzero(s > 0.0)
    if positive.size == 0:
        return ScaleDetection(w_max=-np.inf, no_concentration=True)

    v = f_n.values[positive]
    W = 4.0 * (v / A0) ** 2 - s[positive]
    i = int(np.argmax(W))
    if W[i] <= 0.0:
        return ScaleDetection(w_max=float(W[i]), no_concentration=True)

    alpha = float(s[positive][i])
    # |v_n(alpha_n)| >= A0 sqrt(alpha_n) / 2 along a genuine scale
    degenerate = bool(abs(v[i]) < 0.5 * A0 * np.sqrt(alpha))
    if degenerate:
        logger.warning("degenerate scale %.6g: |v| = %.6g", alpha, abs(v[i]))
    return ScaleDetection(alpha=alpha, w_max=float(W[i]), degenerate=degenerate)


def rescale_to_profile_frame(
    f_n: RadialFunction, alpha_n: float, t_grid: np.ndarray
) -> np.ndarray:
    """psi_n(t) = sqrt(2 pi / alpha_n) v_n(alpha_n t) on ``t_grid``.

    Beyond the grid edge the innermost sample is held: the edge truncates
    r -> 0, where the families stay constant.
    """
    if alpha_n <= 0:
        raise PreconditionError(f"alpha_n must be positive, got {alpha_n}")
    v = f_n.values
    samples = np.interp(alpha_n * np.asarray(t_grid), f_n.grid.nodes, v, left=0.0, right=v[-1])
    return np.sqrt(TWO_PI / alpha_n) * samples


def extract_profile(
    psi_samples: Sequence[np.ndarray], cfg: Optional[ExtractionConfig] = None
) -> Profile:
    """Average the frame derivatives over the reference indices and integrate from 0."""
    cfg = cfg or ExtractionConfig()
    if len(psi_samples) == 0:
        raise PreconditionError("extract_profile needs at least one reference index")
    t = cfg.t_grid()
    samples = np.vstack([np.asarray(p, dtype=float) for p in psi_samples])
    if samples.shape[1] != t.size:
        raise PreconditionError("profile samples do not match the frame grid")

    slopes = np.diff(samples, axis=1).mean(axis=0)
    values = np.concatenate([[0.0], np.cumsum(slopes)])
    profile = Profile(t_max=float(t[-1]), values=values)
    if profile.is_empty:
        logger.warning("extracted profile is empty")
    return profile


def bubble_on_grid(alpha: float, psi: Profile, grid: LogGrid) -> RadialFunction:
    return RadialFunction(
        grid=grid, values=lions_family.BubbleFunction(alpha, psi).of_s(grid.nodes)
    )


def subtract_bubble(f_n: RadialFunction, alpha_n: float, psi: Profile) -> RadialFunction:
    """r_n = f_n - sqrt(alpha_n/2pi) psi(s/alpha_n)."""
    return f_n - bubble_on_grid(alpha_n, psi, f_n.grid)


def check_orthogonality(
    alphaA: Dict[int, float], alphaB: Dict[int, float], threshold: float = 2.0
) -> OrthogonalityReport:
    """|log(beta_n/alpha_n)| at the last common index, required to be non-decreasing."""
    indices = sorted(set(alphaA) & set(alphaB))
    if not indices:
        raise PreconditionError("scale samples share no index")
    gaps = np.array([abs(np.log(alphaB[n] / alphaA[n])) for n in indices])
    margin = float(gaps[-1])
    growing = bool(np.all(np.diff(gaps) >= -1e-12))
    return OrthogonalityReport(orthogonal=margin >= threshold and growing, margin=margin)


def merge_bubbles(
    first: BubbleRecord, second: BubbleRecord, cfg: Optional[ExtractionConfig] = None
) -> BubbleRecord:
    """Express ``second`` in the frame of ``first`` and re-extract one profile.

    At scale alpha_n the bubble (beta_n, phi) reads sqrt(beta_n/alpha_n) phi(alpha_n t / beta_n).
    """
    cfg = cfg or ExtractionConfig()
    t = cfg.t_grid()
    samples = []
    for n in sorted(first.scales):
        alpha, beta = first.scales[n], second.scales[n]
        samples.append(first.profile(t) + np.sqrt(beta / alpha) * second.profile(alpha * t / beta))
    profile = extract_profile(samples, cfg)
    return BubbleRecord(
        scales=dict(first.scales),
        profile=profile,
        grad_norm=profile.grad_norm,
        amplitude=max(first.amplitude, second.amplitude),
    )


def check_compactness(
    seq: RadialSequence,
    R_list: Sequence[float] = (1.0,),
    tol: float = 1e-3,
    tail_count: int = 3,
) -> CompactnessReport:
    """Tail L^2 masses outside |x| = R for every (n, R).

    Passes when the sup over the trailing indices is non-increasing in R and,
    at the largest R, below ``tol`` relative to the largest L^2 norm.
    """
    R_list = list(R_list)
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise PreconditionError("R_list must be increasing")
    masses = [[tail_l2_mass(seq.at(n), R).mass for R in R_list] for n in seq.n_range]
    trailing = masses[-tail_count:]
    tail_sup = [max(row[j] for row in trailing) for j in range(len(R_list))]
    scale = max(l2_norm(seq.at(n)) for n in seq.n_range[-tail_count:])
    passes = bool(
        all(b <= a + 1e-15 for a, b in zip(tail_sup, tail_sup[1:]))
        and tail_sup[-1] <= tol * max(scale, np.finfo(float).tiny)
    )
    return CompactnessReport(
        R_list=R_list, n_list=list(seq.n_range), masses=masses, tail_sup=tail_sup, passes=passes
    )


def _remainders(
    functions: Dict[int, RadialFunction], bubbles: List[BubbleRecord]
) -> Dict[int, RadialFunction]:
    out = {}
    for n, u in functions.items():
        r = u
        for b in bubbles:
            r = subtract_bubble(r, b.scale_at(n), b.profile)
        out[n] = r
    return out


def decompose(
    seq: RadialSequence,
    cfg: Optional[ExtractionConfig] = None,
    ocfg: Optional[OrliczConfig] = None,
    jobs: int = 1,
) -> DecompositionResult:
    """Iterate amplitude, scale, profile and subtraction until the remainder is small.

    Args:
        seq: Bounded radial sequence without mass escaping to infinity.
        cfg: Extraction configuration.
        ocfg: Orlicz norm configuration.
        jobs: Worker threads for per-index norms.

    Returns:
        Bubbles in extraction order with per-level remainder amplitudes and
        stability defects at the largest reference index.

    Raises:
        PreconditionError: if the compactness check fails.
        StagnationError: if a level does not decrease the remainder amplitude.
    """
    cfg = cfg or ExtractionConfig()
    ocfg = ocfg or OrliczConfig()
    ref = _reference(cfg, seq)
    window = _window(cfg, seq)
    indices = sorted(set(ref) | set(window))

    compactness = check_compactness(seq, (1.0,), cfg.compactness_tol)
    if not compactness.passes:
        raise PreconditionError(
            f"mass escapes to infinity: tail sup {compactness.tail_sup}"
        )

    functions = {n: seq.at(n) for n in indices}
    last = ref[-1]
    grad_sq = grad_l2_norm(functions[last]) ** 2

    A0 = _amplitude(functions, window, ocfg, jobs)
    logger.info("A0 estimate %.12g over indices %s", A0, window)
    if A0 == 0.0:
        return DecompositionResult(a0_estimate=0.0, grad_sq=grad_sq)

    t = cfg.t_grid()
    bubbles: List[BubbleRecord] = []
    remainders = dict(functions)
    amplitudes = [A0]
    remainder_orlicz: List[float] = []
    defects: List[float] = []
    A = A0

    for level in range(1, cfg.l_max + 1):
        if A <= cfg.rem_tol * A0:
            break
        # every index whose remainder is tracked needs its own scale
        detections = {n: detect_scale(remainders[n], A) for n in indices}
        if any(d.no_concentration for d in detections.values()):
            logger.info("level %d: no concentration left", level)
            break
        scales = {n: d.alpha for n, d in detections.items()}
        frames = [rescale_to_profile_frame(remainders[n], scales[n], t) for n in ref]
        profile = extract_profile(frames, cfg)
        if profile.is_empty:
            break
        record = BubbleRecord(scales=scales, profile=profile, grad_norm=profile.grad_norm, amplitude=A)

        partner = next(
            (
                j
                for j, b in enumerate(bubbles)
                if not check_orthogonality(b.scales, scales, cfg.ortho_threshold).orthogonal
            ),
            None,
        )
        if partner is None:
            bubbles.append(record)
        else:
            logger.info("level %d: merging with bubble %d", level, partner + 1)
            bubbles[partner] = merge_bubbles(bubbles[partner], record, cfg)

        remainders = _remainders(functions, bubbles)
        A_next = _amplitude(remainders, window, ocfg, jobs)
        logger.debug("level %d: scale %.6g, amplitude %.12g", level, scales[last], A_next)
        if A_next >= A:
            raise StagnationError(level, amplitudes + [A_next])

        A = A_next
        amplitudes.append(A)
        remainder_orlicz.append(A)
        profile_energy = sum(b.grad_norm**2 for b in bubbles)
        defects.append(abs(grad_sq - profile_energy - grad_l2_norm(remainders[last]) ** 2))

    # each extracted profile carries at least (pi/2) A^2 of gradient energy
    budget = sum(0.5 * np.pi * b.amplitude**2 for b in bubbles)
    return DecompositionResult(
        bubbles=bubbles,
        remainder_orlicz=remainder_orlicz,
        stability_defect=defects,
        a0_estimate=A0,
        grad_sq=grad_sq,
        budget_ok=bool(budget <= 1.05 * grad_sq),
    )
