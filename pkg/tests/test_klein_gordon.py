import math

import numpy as np
import pytest

from orlicz_lab.core.exceptions import BlowUpError, ExponentOverflowError, PreconditionError
from orlicz_lab.schemas.wave import EvolutionMode, Regime, RGrid, WaveConfig, WaveState
from orlicz_lab.services import klein_gordon
from orlicz_lab.services.asymptotics import lions_orlicz_norm


def test_nonlinearity_values():
    assert klein_gordon.nonlinearity(0.0) == 0.0
    assert klein_gordon.nonlinearity(0.1) == pytest.approx(0.1 * math.expm1(4.0 * math.pi * 0.01))
    np.testing.assert_allclose(klein_gordon.nonlinearity(np.array([-0.1, 0.1])), [-0.1 * math.expm1(0.04 * math.pi), 0.1 * math.expm1(0.04 * math.pi)])


def test_nonlinearity_overflow():
    with pytest.raises(ExponentOverflowError):
        klein_gordon.nonlinearity(10.0)


def test_laplacian_of_constant_vanishes(wave_grid):
    np.testing.assert_allclose(klein_gordon.laplacian(np.ones(wave_grid.n_r), wave_grid), 0.0, atol=1e-9)


def test_laplacian_of_r_squared_is_four(wave_grid):
    out = klein_gordon.laplacian(wave_grid.nodes**2, wave_grid)
    np.testing.assert_allclose(out[:-1], 4.0, rtol=1e-9)


def test_origin_node_takes_the_disk_average(wave_grid):
    data = klein_gordon.bump_data(1.0, 1.0)
    state = klein_gordon.sample_data(data, wave_grid)
    assert state.u[0] == pytest.approx(1.0, rel=1e-5)
    assert state.u[-1] == 0.0
    assert not np.any(state.ut)


def test_energy_of_small_data_is_subcritical(wave_grid):
    data = klein_gordon.lions_data(0.3, 2.0)
    report = klein_gordon.total_energy(klein_gordon.sample_data(data, wave_grid), wave_grid)
    assert report.kinetic == 0.0
    assert report.total == pytest.approx(report.gradient + report.nonlinear)
    assert report.gradient == pytest.approx(0.09, rel=0.02)
    assert klein_gordon.classify_regime(data, wave_grid) == Regime.SUBCRITICAL


def test_large_data_is_supercritical(wave_grid):
    assert klein_gordon.classify_regime(klein_gordon.lions_data(2.0, 2.0), wave_grid) == Regime.SUPERCRITICAL


def test_energy_scaling_search_hits_the_threshold(wave_grid):
    data = klein_gordon.bump_data(1.0)
    c = klein_gordon.energy_scaling_search(data, wave_grid, 1.0)
    scaled = data.scaled(c)
    assert klein_gordon.initial_energy(scaled, wave_grid) == pytest.approx(1.0, abs=1e-6)
    assert klein_gordon.classify_regime(scaled, wave_grid) == Regime.CRITICAL


def test_cfl_violation_is_rejected(wave_grid):
    with pytest.raises(PreconditionError):
        klein_gordon.evolve(klein_gordon.bump_data(1.0, 0.3), wave_grid, 0.5, dt=wave_grid.dr)


def test_propagation_precondition(wave_grid):
    with pytest.raises(PreconditionError):
        klein_gordon.evolve(klein_gordon.bump_data(1.0, 0.3), wave_grid, 2.0)


def test_trajectory_covers_the_interval(wave_grid):
    cfg = WaveConfig(T=0.5, store_every=10)
    trajectory = klein_gordon.evolve_with(klein_gordon.bump_data(1.0, 0.3), wave_grid, cfg)
    assert trajectory.times[0] == 0.0
    assert trajectory.times[-1] == pytest.approx(0.5)
    assert len(trajectory.states) == len(trajectory.energies)
    assert trajectory.mode == EvolutionMode.NONLINEAR


@pytest.mark.parametrize("mode, tol", [(EvolutionMode.LINEAR, 1e-3), (EvolutionMode.NONLINEAR, 1e-2)])
def test_energy_is_conserved(wave_grid, mode, tol):
    trajectory = klein_gordon.evolve(klein_gordon.bump_data(1.0, 0.3), wave_grid, 1.0, mode=mode)
    assert trajectory.energy_drift() < tol


def test_finite_speed_of_propagation():
    grid = RGrid(R=2.5, n_r=4096)
    final = klein_gordon.evolve(klein_gordon.bump_data(1.0, 0.3), grid, 1.0, mode=EvolutionMode.LINEAR).final
    ahead = grid.nodes > 2.0 + 2.0 * grid.dr
    assert np.max(np.abs(final.u[ahead])) < 1e-12


def test_blow_up_is_reported():
    with pytest.raises(BlowUpError) as info:
        klein_gordon.evolve(klein_gordon.lions_data(5.0, 8.0), RGrid(R=3.0, n_r=2048), 1.0)
    assert info.value.time <= 1.0


def test_state_difference(wave_grid):
    a = WaveState(u=np.ones(3), ut=np.zeros(3), time=0.5)
    b = WaveState(u=np.ones(3), ut=np.ones(3), time=0.5)
    diff = a - b
    np.testing.assert_allclose(diff.u, 0.0)
    np.testing.assert_allclose(diff.ut, -1.0)


def test_kinetic_gap_shrinks_with_the_data():
    grid = RGrid(R=2.5, n_r=1024)
    gaps = [klein_gordon.kinetic_gap(klein_gordon.lions_data(c, 4.0), 1.0, grid) for c in (0.4, 0.2, 0.1)]
    assert gaps[0] > gaps[1] > gaps[2] > 0.0


@pytest.mark.slow
def test_kinetic_gap_shrinks_with_concentration_at_fixed_energy():
    grid = RGrid(R=2.5, n_r=4096)
    data = [klein_gordon.lions_data_at_energy(a, grid, 0.3) for a in (2.0, 4.0, 6.0)]
    for d in data:
        assert klein_gordon.initial_energy(d, grid) == pytest.approx(0.3, rel=1e-8)
    gaps = [klein_gordon.kinetic_gap(d, 1.0, grid) for d in data]
    assert gaps[0] > gaps[1] > gaps[2]


def test_resolved_lions_data_keeps_its_gradient_energy():
    grid = RGrid(R=2.5, n_r=4096)
    for alpha in (2.0, 4.0, 6.0):
        assert klein_gordon.core_resolved(alpha, grid)
        state = klein_gordon.sample_data(klein_gordon.lions_data(1.0, alpha), grid)
        assert klein_gordon.total_energy(state, grid).gradient == pytest.approx(1.0, rel=0.05)


def test_unresolved_core_is_rejected():
    grid = RGrid(R=2.5, n_r=4096)
    assert not klein_gordon.core_resolved(8.0, grid)
    with pytest.raises(PreconditionError):
        klein_gordon.lions_data_at_energy(16.0, grid, 0.3)


def test_lions_data_at_energy_hits_the_target(wave_grid):
    for alpha in (2.0, 4.0):
        data = klein_gordon.lions_data_at_energy(alpha, wave_grid, 0.3)
        assert klein_gordon.initial_energy(data, wave_grid) == pytest.approx(0.3, rel=1e-8)
        assert klein_gordon.classify_regime(data, wave_grid) == Regime.SUBCRITICAL


def test_regime_is_monotone_in_the_amplitude(wave_grid):
    data = klein_gordon.bump_data(1.0)
    order = {Regime.SUBCRITICAL: 0, Regime.CRITICAL: 1, Regime.SUPERCRITICAL: 2}
    c_star = klein_gordon.energy_scaling_search(data, wave_grid, 1.0)
    scales = np.linspace(0.2, 1.8, 17) * c_star
    regimes = [order[klein_gordon.classify_regime(data.scaled(c), wave_grid)] for c in scales]
    assert regimes == sorted(regimes)
    assert regimes[0] == 0 and regimes[-1] == 2


def test_kinetic_gap_decays_faster_than_the_square_amplitude(wave_grid):
    gaps = [klein_gordon.kinetic_gap(klein_gordon.lions_data(c, 4.0), 0.5, wave_grid) for c in (0.2, 0.1, 0.05)]
    for big, small in zip(gaps, gaps[1:]):
        assert small < 0.25 * big


def test_snapshot_norm_matches_log_grid_norm():
    grid = RGrid(R=3.0, n_r=4096)
    state = klein_gordon.sample_data(klein_gordon.lions_data(1.0, 2.0), grid)
    assert klein_gordon.orlicz_snapshot_norm(state, grid) == pytest.approx(lions_orlicz_norm(2.0), rel=1e-2)


def test_bump_vanishes_outside_its_radius():
    bump = klein_gordon.Bump(0.5, 2.0)
    np.testing.assert_allclose(bump(np.array([0.5, 0.75, 2.0])), 0.0)
    assert bump(0.0) == pytest.approx(2.0)
    with pytest.raises(PreconditionError):
        klein_gordon.Bump(0.0)
