import math

import numpy as np
import pytest

from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.services import inequalities, lions_family
from orlicz_lab.services.asymptotics import lions_orlicz_norm
from orlicz_lab.services.radial_core import sample_from_closure


@pytest.fixture
def lions5_coarse():
    return sample_from_closure(lions_family.lions_f(5.0), LogGrid.from_spacing(-2.0, 30.0, 1.0 / 64.0))


def test_radial_constant_for_p2():
    assert inequalities.radial_constant(2.0) == pytest.approx(math.sqrt(2.0))


def test_radial_bound_holds_for_lions(lions5_coarse):
    report = inequalities.radial_bound_check(lions5_coarse, 2.0)
    assert report.holds
    assert 0.0 < report.ratio <= report.constant


def test_radial_bound_of_zero_is_undefined():
    report = inequalities.radial_bound_check(RadialFunction.zeros(LogGrid.from_spacing(0.0, 5.0, 0.5)), 2.0)
    assert report.undefined
    assert report.holds


def test_holder_seminorm_of_constant_is_zero():
    grid = LogGrid.from_spacing(-1.0, 5.0, 0.25)
    f = RadialFunction(grid=grid, values=np.full(grid.n_points, 2.0))
    assert inequalities.holder_seminorm(f, 0.5) == 0.0


def test_holder_seminorm_rejects_exponent_outside_unit_interval(lions5_coarse):
    with pytest.raises(PreconditionError):
        inequalities.holder_seminorm(lions5_coarse, 1.0)


def test_log_inequality_constant(lions5_coarse):
    report = inequalities.log_inequality_probe(lions5_coarse, lam=1.0, mu=1.0, alpha_h=0.5)
    assert not report.degenerate
    assert 0.0 <= report.empirical_C < math.inf
    assert report.sup_norm == pytest.approx(math.sqrt(5.0 / (2.0 * math.pi)))


def test_log_inequality_on_unit_disk(lions5_coarse):
    report = inequalities.log_inequality_probe(lions5_coarse, lam=1.0, mu=0.5, alpha_h=0.5, on_unit_disk=True)
    assert report.on_unit_disk
    assert report.energy_norm == pytest.approx(1.0, abs=0.01)


def test_log_inequality_needs_lambda_above_threshold(lions5_coarse):
    with pytest.raises(PreconditionError):
        inequalities.log_inequality_probe(lions5_coarse, lam=0.1, mu=1.0, alpha_h=0.5)


def test_log_inequality_of_zero_is_degenerate():
    zero = RadialFunction.zeros(LogGrid.from_spacing(-1.0, 5.0, 0.25))
    report = inequalities.log_inequality_probe(zero, lam=1.0, mu=1.0, alpha_h=0.5)
    assert report.degenerate
    assert report.empirical_C == 0.0


def test_superlevel_measure_of_lions_function(lions5_coarse):
    height = math.sqrt(5.0 / (2.0 * math.pi))
    # |u| >= height/2 exactly where s >= 2.5
    expected = math.pi * (math.exp(-5.0) - math.exp(-60.0))
    assert inequalities.superlevel_measure(lions5_coarse, 0.5 * height) == pytest.approx(expected, rel=1e-9)


def test_superlevel_measure_counts_negative_values(lions5_coarse):
    eps = 0.3
    assert inequalities.superlevel_measure(-lions5_coarse, eps) == pytest.approx(
        inequalities.superlevel_measure(lions5_coarse, eps), rel=1e-12
    )


def test_superlevel_measure_above_sup_is_zero(lions5_coarse):
    assert inequalities.superlevel_measure(lions5_coarse, 10.0) == 0.0
    with pytest.raises(PreconditionError):
        inequalities.superlevel_measure(lions5_coarse, 0.0)


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.5, 0.8])
def test_tchebychev_slack_is_nonnegative(lions5_coarse, eps):
    assert inequalities.tchebychev_slack(lions5_coarse, eps) >= 0.0


@pytest.mark.parametrize("alpha", [1.0, 2.0 * math.pi, 10.0])
def test_bmo_average_matches_closed_form(alpha):
    report = inequalities.bmo_probe(alpha)
    assert report.mean == 0.0
    assert report.relative_error <= 1e-6


def test_bmo_average_grows_while_orlicz_norm_settles():
    growth = inequalities.bmo_probe(20.0).average_modulus / inequalities.bmo_probe(10.0).average_modulus
    assert growth >= 1.3
    change = abs(lions_orlicz_norm(20.0) / lions_orlicz_norm(10.0) - 1.0)
    assert change < 0.05


def test_bmo_average_rejects_nonpositive_alpha():
    with pytest.raises(PreconditionError):
        inequalities.bmo_probe(0.0)


def test_superlevel_measure_shrinks_as_the_level_rises(lions5_coarse):
    measures = [inequalities.superlevel_measure(lions5_coarse, eps) for eps in (0.05, 0.1, 0.3, 0.6, 0.85)]
    assert all(b <= a for a, b in zip(measures, measures[1:]))
    assert measures[-1] < measures[0]


def test_log_inequality_constant_shrinks_with_lambda(lions5_coarse):
    constants = [
        inequalities.log_inequality_probe(lions5_coarse, lam=lam, mu=1.0, alpha_h=0.5).empirical_C
        for lam in (0.5, 1.0, 2.0, 4.0)
    ]
    assert all(b <= a for a, b in zip(constants, constants[1:]))
