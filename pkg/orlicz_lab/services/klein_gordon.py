"""Radial Klein-Gordon flows with exponential nonlinearity.

    u_tt - u_rr - u_r / r + u + f(u) = 0,   f(u) = u (e^{4 pi u^2} - 1)

on [0, R] with u_r(0) = 0 and u(R) = 0. Space is discretised conservatively:
node i carries the control area 2 pi w_i (w_0 = dr^2/8, w_i = r_i dr), and
gradients live on the half nodes r_{i+1/2}, so the semi-discrete system is the
Hamiltonian flow of the discrete energy. Time stepping is velocity Verlet
(kick-drift-kick); the linear flow drops f.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from orlicz_lab.core.exceptions import BlowUpError, ExponentOverflowError, NonConvergenceError, PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.wave import (
    CauchyData,
    EnergyReport,
    EvolutionMode,
    Regime,
    RGrid,
    Trajectory,
    WaveConfig,
    WaveState,
)
from orlicz_lab.services import lions_family
from orlicz_lab.services.orlicz import orlicz_norm
from orlicz_lab.services.radial_core import TWO_PI, RadialClosure

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * math.pi
# Largest admissible 4 pi u^2
EXPONENT_CAP = 700.0
REGIME_BAND = 1e-3
STORED_SAMPLES = 100
# Cells the Lions core r < e^{-alpha} must span
RESOLVED_CELLS = 4.0


def nonlinearity(u):
    """f(u) = u (e^{4 pi u^2} - 1).

    Raises:
        ExponentOverflowError: if 4 pi u^2 exceeds the cap.
    """
    u = np.asarray(u, dtype=float)
    exponent = FOUR_PI * u * u
    worst = float(np.max(exponent)) if exponent.size else 0.0
    if worst > EXPONENT_CAP:
        raise ExponentOverflowError(None, worst)
    out = u * np.expm1(exponent)
    return float(out) if out.ndim == 0 else out


def _weights(grid: RGrid) -> np.ndarray:
    dr = grid.dr
    w = grid.nodes * dr
    w[0] = dr * dr / 8.0
    w[-1] = 0.0
    return w


def _half_nodes(grid: RGrid) -> np.ndarray:
    return (np.arange(grid.n_r - 1) + 0.5) * grid.dr


def _origin_average(closure, dr: float) -> float:
    """Mean of a radial closure over the origin's control disk |x| < dr/2."""
    s0 = -math.log(0.5 * dr)
    if isinstance(closure, RadialClosure):
        value = lambda sigma: float(closure.of_s(np.asarray(s0 + sigma)))
    else:
        value = lambda sigma: float(closure(np.asarray(math.exp(-(s0 + sigma)))))
    integral, _ = quad(lambda sigma: value(sigma) * math.exp(-2.0 * sigma), 0.0, math.inf, limit=200)
    return 2.0 * integral


def _sample(closure, grid: RGrid) -> np.ndarray:
    r = grid.nodes
    values = np.zeros(grid.n_r)
    if closure is not None:
        values = np.array(np.broadcast_to(closure(r), r.shape), dtype=float)
        values[0] = _origin_average(closure, grid.dr)
    values[-1] = 0.0
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise PreconditionError(f"Cauchy data not finite at r = {r[bad[0]]:.6g}")
    return values


def sample_data(data: CauchyData, grid: RGrid) -> WaveState:
    """Node values of (phi, psi); the origin node takes the mean over its control disk."""
    return WaveState(u=_sample(data.phi, grid), ut=_sample(data.psi, grid), time=0.0)


def laplacian(u: np.ndarray, grid: RGrid) -> np.ndarray:
    dr = grid.dr
    flux = _half_nodes(grid) * np.diff(u) / dr
    out = np.zeros_like(u)
    # w_i (Lap u)_i = flux_{i+1/2} - flux_{i-1/2}, no flux through r = 0
    out[:-1] = (flux - np.concatenate(([0.0], flux[:-1]))) / _weights(grid)[:-1]
    return out


def _acceleration(u: np.ndarray, grid: RGrid, mode: EvolutionMode, time: float) -> np.ndarray:
    acc = laplacian(u, grid) - u
    if mode == EvolutionMode.NONLINEAR:
        exponent = FOUR_PI * u * u
        bad = np.flatnonzero(~(exponent <= EXPONENT_CAP))
        if bad.size:
            node = int(bad[0])
            raise BlowUpError(time, node, float(u[node]))
        acc -= u * np.expm1(exponent)
    acc[-1] = 0.0
    return acc


def _quadratic_parts(u: np.ndarray, ut: np.ndarray, grid: RGrid) -> Tuple[float, float, float]:
    w = _weights(grid)
    kinetic = TWO_PI * float(np.sum(w * ut * ut))
    gradient = TWO_PI * float(np.sum(_half_nodes(grid) * np.diff(u) ** 2) / grid.dr)
    mass = TWO_PI * float(np.sum(w * u * u))
    return kinetic, gradient, mass


def total_energy(state: WaveState, grid: RGrid) -> EnergyReport:
    """E = ||u_t||^2 + ||grad u||^2 + (1/4 pi) int (e^{4 pi u^2} - 1), plus E_c.

    Raises:
        ExponentOverflowError: if 4 pi u^2 exceeds the cap at some node.
    """
    if state.u.size != grid.n_r:
        raise PreconditionError("state does not match the grid")
    kinetic, gradient, mass = _quadratic_parts(state.u, state.ut, grid)
    exponent = FOUR_PI * state.u**2
    worst = int(np.argmax(exponent))
    if exponent[worst] > EXPONENT_CAP:
        raise ExponentOverflowError(float(grid.nodes[worst]), float(exponent[worst]))
    nonlinear = TWO_PI * float(np.sum(_weights(grid) * np.expm1(exponent))) / FOUR_PI
    return EnergyReport(
        kinetic=kinetic,
        gradient=gradient,
        nonlinear=nonlinear,
        total=kinetic + gradient + nonlinear,
        E_c=kinetic + gradient + mass,
    )


def initial_energy(data: CauchyData, grid: RGrid) -> float:
    """E_0 of the data; infinite when the exponential overflows."""
    try:
        return total_energy(sample_data(data, grid), grid).total
    except ExponentOverflowError:
        return math.inf


def classify_regime(data: CauchyData, grid: RGrid, band: float = REGIME_BAND) -> Regime:
    e0 = initial_energy(data, grid)
    if e0 < 1.0 - band:
        return Regime.SUBCRITICAL
    if e0 > 1.0 + band:
        return Regime.SUPERCRITICAL
    return Regime.CRITICAL


def support_radius(state: WaveState, grid: RGrid) -> float:
    live = np.flatnonzero((state.u != 0.0) | (state.ut != 0.0))
    return float(grid.nodes[live[-1]]) if live.size else 0.0


def evolve(
    data: CauchyData,
    grid: RGrid,
    T: float,
    dt: Optional[float] = None,
    mode: EvolutionMode = EvolutionMode.NONLINEAR,
    store_every: Optional[int] = None,
    cfl: float = 0.5,
) -> Trajectory:
    """Integrate the radial flow up to time T.

    Args:
        data: Cauchy data (phi, psi).
        grid: Radial grid.
        T: Final time.
        dt: Time step; defaults to cfl * dr. Rounded down so that T is hit exactly.
        mode: Nonlinear or linear flow.
        store_every: Keep every k-th step; defaults to about a hundred samples.
        cfl: Largest admissible dt / dr.

    Returns:
        Stored states with their energies, starting at t = 0 and ending at T.

    Raises:
        PreconditionError: on a CFL violation or if T >= R - support radius.
        BlowUpError: if the exponential overflows during stepping.
    """
    if T <= 0:
        raise PreconditionError(f"T must be positive, got {T}")
    dr = grid.dr
    dt = cfl * dr if dt is None else dt
    if dt <= 0 or dt > cfl * dr * (1.0 + 1e-12):
        raise PreconditionError(f"dt = {dt:.6g} violates dt <= {cfl:g} dr = {cfl * dr:.6g}")

    state = sample_data(data, grid)
    rho = support_radius(state, grid)
    if T >= grid.R - rho:
        raise PreconditionError(
            f"T = {T:g} must stay below R - support radius = {grid.R - rho:.6g}"
        )

    n_steps = max(1, math.ceil(T / dt - 1e-9))
    dt = T / n_steps
    if store_every is None:
        store_every = max(1, n_steps // STORED_SAMPLES)

    u = state.u.copy()
    ut = state.ut.copy()
    states = [state]
    energies = [total_energy(state, grid)]
    logger.debug("evolve %s: %d steps of %.6g on %d nodes", mode.value, n_steps, dt, grid.n_r)

    acc = _acceleration(u, grid, mode, 0.0)
    for k in range(1, n_steps + 1):
        t = k * dt
        ut += 0.5 * dt * acc
        u += dt * ut
        u[-1] = 0.0
        acc = _acceleration(u, grid, mode, t)
        ut += 0.5 * dt * acc
        ut[-1] = 0.0
        if k % store_every == 0 or k == n_steps:
            snapshot = WaveState(u=u, ut=ut, time=t)
            states.append(snapshot)
            energies.append(total_energy(snapshot, grid))

    return Trajectory(mode=mode, grid=grid, dt=dt, states=states, energies=energies)


def evolve_with(data: CauchyData, grid: RGrid, cfg: WaveConfig) -> Trajectory:
    return evolve(data, grid, cfg.T, cfg.time_step(grid), cfg.mode, cfg.store_every, cfg.cfl)


def kinetic_energy_of(state: WaveState, grid: RGrid) -> float:
    """E_c = ||w_t||^2 + ||grad w||^2 + ||w||^2."""
    return sum(_quadratic_parts(state.u, state.ut, grid))


def kinetic_gap(
    data: CauchyData,
    T: float,
    grid: RGrid,
    dt: Optional[float] = None,
    store_every: Optional[int] = None,
) -> float:
    """sup over stored times of E_c(u - v), u nonlinear and v linear from the same data."""
    u = evolve(data, grid, T, dt, EvolutionMode.NONLINEAR, store_every)
    v = evolve(data, grid, T, dt, EvolutionMode.LINEAR, store_every)
    return max(kinetic_energy_of(a - b, grid) for a, b in zip(u.states, v.states))


def orlicz_snapshot_norm(
    state: WaveState,
    grid: RGrid,
    ocfg: Optional[OrliczConfig] = None,
    ds: float = 0.01,
    depth: float = 20.0,
) -> float:
    """Orlicz norm of u(t) after interpolation onto a log-grid reaching ``depth`` below dr."""
    s_max = -math.log(grid.dr) + depth
    log_grid = LogGrid.from_spacing(-math.log(grid.R), s_max, ds)
    values = np.interp(np.exp(-log_grid.nodes), grid.nodes, state.u)
    return orlicz_norm(RadialFunction(grid=log_grid, values=values), ocfg)


def lions_data(c: float, alpha: float) -> CauchyData:
    """(c f_alpha, 0)."""
    f = lions_family.lions_f(alpha)
    data = CauchyData(phi=f, label=f"lions({alpha:g})")
    return data if c == 1.0 else data.scaled(c)


def core_resolved(alpha: float, grid: RGrid, cells: float = RESOLVED_CELLS) -> bool:
    return math.exp(-alpha) >= cells * grid.dr


def lions_data_at_energy(alpha: float, grid: RGrid, target: float) -> CauchyData:
    """(c f_alpha, 0) with E_0 = target on ``grid``.

    Raises:
        PreconditionError: if the grid does not resolve the core r < e^{-alpha};
            the sampled data would then carry only part of its energy.
    """
    if not core_resolved(alpha, grid):
        raise PreconditionError(
            f"dr = {grid.dr:.3g} does not resolve the core e^-{alpha:g} = {math.exp(-alpha):.3g}"
        )
    base = lions_data(1.0, alpha)
    return base.scaled(energy_scaling_search(base, grid, target))


class Bump(RadialClosure):
    """amplitude * e^{1 - 1/(1 - (r/rho)^2)} inside r < rho, zero outside."""

    def __init__(self, rho: float, amplitude: float = 1.0):
        if rho <= 0:
            raise PreconditionError(f"bump radius must be positive, got {rho}")
        self.rho = float(rho)
        self.amplitude = float(amplitude)

    def of_s(self, s):
        x = np.exp(-np.asarray(s, dtype=float)) / self.rho
        inside = x < 1.0
        gap = np.where(inside, 1.0 - x * x, 1.0)
        return np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / gap), 0.0)


def bump_data(rho: float, amplitude: float = 1.0) -> CauchyData:
    return CauchyData(phi=Bump(rho, amplitude), label=f"bump({rho:g})")


def energy_scaling_search(
    data: CauchyData, grid: RGrid, target: float, xtol: float = 1e-12, max_doublings: int = 60
) -> float:
    """c > 0 with E_0(c data) = target."""
    if target <= 0:
        raise PreconditionError(f"target energy must be positive, got {target}")

    def excess(c: float) -> float:
        return min(initial_energy(data.scaled(c), grid), 1e300) - target

    hi = 1.0
    for _ in range(max_doublings):
        if excess(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NonConvergenceError(f"E_0 stays below {target:g} up to c = {hi:g}")
    return float(brentq(excess, 0.0, hi, xtol=xtol))
