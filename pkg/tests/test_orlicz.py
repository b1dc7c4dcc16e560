import math

import numpy as np
import pytest

from orlicz_lab.core.exceptions import ExponentOverflowError, PreconditionError
from orlicz_lab.schemas.grid import LogGrid, RadialFunction
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.services import lions_family
from orlicz_lab.services.orlicz import (
    lp_moment_bound_check,
    moser_ratio_probe,
    orlicz_l2_sandwich_check,
    orlicz_norm,
    tm_integral,
)
from orlicz_lab.services.radial_core import l2_norm, sample_from_closure


@pytest.fixture
def lions50():
    return sample_from_closure(lions_family.lions_f(50.0), lions_family.family_grid(50.0))


def test_zero_function_has_zero_norm(fine_grid):
    zero = RadialFunction.zeros(fine_grid)
    assert tm_integral(zero, 1.0) == 0.0
    assert orlicz_norm(zero) == 0.0


def test_functional_decreases_in_lambda(lions5):
    values = [tm_integral(lions5, lam) for lam in (0.2, 0.3, 0.5, 1.0)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_functional_rejects_nonpositive_lambda(lions5):
    with pytest.raises(PreconditionError):
        tm_integral(lions5, 0.0)


def test_overflow_is_reported(lions50):
    with pytest.raises(ExponentOverflowError) as info:
        tm_integral(lions50, 0.01)
    assert info.value.exponent > 700.0


def test_norm_is_the_feasibility_threshold(lions5, ocfg):
    norm = orlicz_norm(lions5, ocfg)
    assert tm_integral(lions5, norm, ocfg) <= ocfg.kappa
    assert tm_integral(lions5, norm * (1.0 - 2.0 * ocfg.bisect_tol), ocfg) > ocfg.kappa


def test_norm_is_bounded_below_by_l2(lions5, ocfg):
    assert orlicz_norm(lions5, ocfg) >= l2_norm(lions5) / math.sqrt(ocfg.kappa)


def test_homogeneity(lions5, ocfg):
    base = orlicz_norm(lions5, ocfg)
    for c in (-2.0, 0.5, 3.0):
        assert orlicz_norm(c * lions5, ocfg) == pytest.approx(abs(c) * base, rel=5e-8)


def test_larger_kappa_gives_smaller_norm(lions5):
    assert orlicz_norm(lions5, OrliczConfig(kappa=2.0)) < orlicz_norm(lions5, OrliczConfig(kappa=1.0))


def test_lions_norm_near_the_limit(lions50):
    assert orlicz_norm(lions50) == pytest.approx(0.284, abs=3e-3)


def test_mass_only_beyond_underflow_still_converges():
    grid = LogGrid.from_spacing(400.0, 420.0, 0.5)
    f = RadialFunction(grid=grid, values=np.ones(grid.n_points))
    assert orlicz_norm(f) > 0.0


def test_moser_ratio_bounded_below_critical_exponent():
    ratios = [moser_ratio_probe(2.0 * math.pi, beta).ratio for beta in (5.0, 10.0, 20.0, 40.0)]
    assert max(ratios) / min(ratios) < 3.0


def test_moser_ratio_diverges_at_critical_exponent():
    low = moser_ratio_probe(4.0 * math.pi, 5.0)
    high = moser_ratio_probe(4.0 * math.pi, 40.0)
    assert high.ratio > 5.0 * low.ratio
    assert high.integral > 0.0


def test_moser_ratio_rejects_nonpositive_parameters():
    with pytest.raises(PreconditionError):
        moser_ratio_probe(-1.0, 5.0)


def test_sandwich_holds_for_lions(lions5):
    report = orlicz_l2_sandwich_check(lions5, 0.5)
    assert report.holds
    assert not report.upper_unbounded
    assert report.lower_slack >= 0.0


def test_sandwich_reports_unbounded_upper():
    grid = LogGrid.from_spacing(-2.0, 10.0, 0.5)
    f = sample_from_closure(lions_family.LinearCombination([(30.0, lions_family.lions_f(2.0))]), grid)
    report = orlicz_l2_sandwich_check(f, 0.1)
    assert report.upper_unbounded
    assert report.upper_bound is None
    assert report.holds


def test_sandwich_rejects_mu_outside_unit_interval(lions5):
    with pytest.raises(PreconditionError):
        orlicz_l2_sandwich_check(lions5, 1.5)


def test_moment_bounds(lions5):
    rows = lp_moment_bound_check(lions5, 6)
    assert [row.q for row in rows] == [1, 2, 3, 4, 5, 6]
    assert all(row.holds for row in rows)


def test_moment_bounds_need_positive_order(lions5):
    with pytest.raises(PreconditionError):
        lp_moment_bound_check(lions5, 0)
