import math

import numpy as np
import pytest
from pydantic import ValidationError

from orlicz_lab.core.exceptions import PreconditionError, SamplingError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.services import lions_family
from orlicz_lab.services.radial_core import (
    grad_l2_norm,
    l2_norm,
    l2_norm_squared,
    lp_norm,
    norms,
    resample,
    sample_from_closure,
    tail_l2_mass,
)


def test_grid_spacing_and_nodes():
    grid = LogGrid.from_spacing(-2.0, 50.0, 0.25)
    assert grid.n_points == 209
    assert grid.ds == pytest.approx(0.25)
    assert grid.nodes[0] == -2.0
    assert grid.nodes[-1] == pytest.approx(50.0)


def test_grid_rejects_reversed_bounds():
    with pytest.raises(ValidationError):
        LogGrid(s_min=1.0, s_max=0.0, n_points=10)


def test_radial_function_rejects_non_finite_samples():
    grid = LogGrid.from_spacing(0.0, 1.0, 0.5)
    with pytest.raises(ValidationError):
        RadialFunction(grid=grid, values=[0.0, np.nan, 1.0])


def test_arithmetic_requires_same_grid():
    a = RadialFunction.zeros(LogGrid.from_spacing(0.0, 1.0, 0.5))
    b = RadialFunction.zeros(LogGrid.from_spacing(0.0, 2.0, 0.5))
    with pytest.raises(ValueError):
        a + b


def test_grid_mismatch_is_a_usage_error():
    a = RadialFunction.zeros(LogGrid.from_spacing(0.0, 1.0, 0.5))
    b = RadialFunction.zeros(LogGrid.from_spacing(0.0, 1.0, 0.25))
    with pytest.raises(PreconditionError) as info:
        a - b
    assert info.value.exit_code == 2


def test_lions_l2_matches_closed_form(lions5):
    exact = lions_family.lions_l2_closed_form(5.0)
    assert l2_norm_squared(lions5) == pytest.approx(exact, rel=1e-5)


def test_lions_gradient_norm_is_one(lions5):
    assert grad_l2_norm(lions5) == pytest.approx(1.0, abs=1e-3)


def test_norm_report(lions5):
    report = norms(lions5)
    assert report.h1 == pytest.approx(math.hypot(report.l2, report.grad_l2))


def test_lp_norm_p2_is_l2(lions5):
    assert lp_norm(lions5, 2.0) == pytest.approx(l2_norm(lions5), rel=1e-12)


def test_lp_norm_rejects_small_p(lions5):
    with pytest.raises(PreconditionError):
        lp_norm(lions5, 0.5)


def test_sampling_error_names_the_node():
    grid = LogGrid.from_spacing(-1.0, 3.0, 0.5)
    with pytest.raises(SamplingError) as info:
        sample_from_closure(lambda r: np.where(r < 0.5, np.inf, 0.0), grid)
    assert info.value.node == pytest.approx(1.0)


def test_plain_callables_are_sampled_in_r():
    grid = LogGrid.from_spacing(0.0, 2.0, 0.5)
    f = sample_from_closure(lambda r: r, grid)
    np.testing.assert_allclose(f.values, np.exp(-grid.nodes))


def test_tail_mass_outside_unit_ball_vanishes_for_lions(lions5):
    assert tail_l2_mass(lions5, 1.0).mass == 0.0


def test_tail_mass_of_inner_annulus():
    grid = LogGrid.from_spacing(-2.0, 50.0, 1.0 / 64.0)
    f = sample_from_closure(lions_family.lions_f(5.0), grid)
    # 2 pi int_0^1 (s^2 / (2 pi alpha)) e^{-2s} ds
    exact = (0.25 - 1.25 * math.exp(-2.0)) / 5.0
    assert tail_l2_mass(f, math.exp(-1.0)).mass ** 2 == pytest.approx(exact, rel=1e-3)


def test_tail_mass_beyond_grid_is_truncated(lions5):
    report = tail_l2_mass(lions5, 100.0)
    assert report.truncated
    assert report.mass == 0.0


def test_resample_zero_extends():
    f = sample_from_closure(lions_family.lions_f(2.0), LogGrid.from_spacing(0.0, 10.0, 0.125))
    wider = LogGrid.from_spacing(-2.0, 10.0, 0.125)
    out = resample(f, wider)
    assert out.extrapolated
    assert np.all(out.function.values[wider.nodes < 0.0] == 0.0)
    np.testing.assert_allclose(out.function.values[wider.nodes >= 0.0], f.values, atol=1e-12)


def test_resample_inside_domain_is_not_flagged(lions5):
    narrower = LogGrid.from_spacing(0.0, 10.0, 0.5)
    out = resample(lions5, narrower)
    assert not out.extrapolated
    np.testing.assert_allclose(out.function.values, lions_family.lions_f(5.0).of_s(narrower.nodes), atol=1e-12)


def test_tail_mass_shrinks_with_the_radius():
    grid = LogGrid.from_spacing(-3.0, 20.0, 1.0 / 64.0)
    f = sample_from_closure(lambda r: np.exp(-r * r), grid)
    masses = [tail_l2_mass(f, R).mass for R in (0.1, 0.3, 1.0, 3.0, 10.0)]
    assert all(b <= a for a, b in zip(masses, masses[1:]))
    assert masses[0] <= l2_norm(f)


def test_l2_norm_converges_at_second_order():
    exact = lions_family.lions_l2_closed_form(1.0)
    errors = []
    for ds in (1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0):
        f = sample_from_closure(lions_family.lions_f(1.0), LogGrid.from_spacing(-2.0, 30.0, ds))
        errors.append(abs(l2_norm_squared(f) - exact))
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=0.05)
    assert math.sqrt(exact) == pytest.approx(0.38536, abs=1e-5)
