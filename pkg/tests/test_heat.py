"""Exact lazy-walk heat kernels."""

from fractions import Fraction

import pytest

from growthlab import heat
from growthlab.bounds import BoundStatus
from growthlab.errors import BudgetExceeded
from growthlab.groups import ball_profile, builtin_group
from growthlab.heat import (
    check_return_bounds,
    lazy_step,
    measured_growth_constant,
    point_mass,
    return_series,
    walk_distributions,
)


def test_single_step_on_z():
    model = builtin_group("z")
    dist = lazy_step(model, point_mass(model))
    assert dist.support == {(0,): Fraction(1, 2), (1,): Fraction(1, 4), (-1,): Fraction(1, 4)}


def test_two_steps_on_z():
    series = return_series(builtin_group("z"), 2)
    assert list(series.values) == [1, Fraction(1, 2), Fraction(3, 8)]


def test_uniform_is_stationary_on_cyclic():
    model = builtin_group("cyclic:6")
    uniform = heat.Distribution({g: Fraction(1, 6) for g in range(6)})
    stepped = lazy_step(model, uniform)
    assert stepped.support == uniform.support


def test_cyclic_two_elements():
    series = return_series(builtin_group("cyclic:2"), 3)
    model = builtin_group("cyclic:2")
    assert model.valency == 1
    assert series.at(1) == Fraction(1, 2)


def test_mass_exactly_one_every_step():
    for name in ("z", "zd:2", "heisenberg"):
        model = builtin_group(name)
        dist = point_mass(model)
        for _ in range(6):
            dist = lazy_step(model, dist)
            assert sum(dist.support.values()) == 1


def test_support_in_ball():
    model = builtin_group("heisenberg")
    dists = walk_distributions(model, 4)
    profile = ball_profile(model, 4)
    for t, dist in enumerate(dists):
        assert len(dist.support) <= profile.size(t)


def test_returns_monotone_nonincreasing():
    for name in ("z", "zd:2", "heisenberg", "cyclic:5"):
        series = return_series(builtin_group(name), 10)
        for t in range(series.steps):
            assert series.at(t + 1) <= series.at(t)


def test_spectral_floor():
    for name in ("z", "zd:2", "heisenberg"):
        model = builtin_group(name)
        series = return_series(model, 20)
        profile = ball_profile(model, 10)
        for t in range(1, 11):
            assert series.at(2 * t) >= Fraction(1, profile.size(t))


def test_symmetry_under_inverse():
    for name in ("z", "zd:2", "heisenberg"):
        model = builtin_group(name)
        dists = walk_distributions(model, 5)
        final = dists[-1]
        for g, p in final.support.items():
            assert final.mass_at(model.inverse(g)) == p


def test_spectral_example_z():
    series = return_series(builtin_group("z"), 2)
    assert series.at(2) == Fraction(3, 8) >= Fraction(1, 3)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        return_series(builtin_group("zd:2"), 10, budget=20)


def test_measured_constant_z():
    profile = ball_profile(builtin_group("z"), 10)
    assert measured_growth_constant(profile, 1) == Fraction(21, 10)


def test_check_return_bounds_all_hold():
    cases = [("z", 1), ("zd:2", 2), ("heisenberg", 4)]
    for name, d in cases:
        model = builtin_group(name)
        series = return_series(model, 10)
        profile = ball_profile(model, 10)
        c = measured_growth_constant(profile, d)
        reports = check_return_bounds(series, profile, d, model.valency, c)
        assert reports
        assert all(r.status is BoundStatus.SATISFIED for r in reports)


def test_check_return_bounds_with_tower_constant():
    from growthlab.bounds import min_growth_constant

    model = builtin_group("zd:2")
    series = return_series(model, 6)
    profile = ball_profile(model, 6)
    eps = min_growth_constant(2, 100).value
    reports = check_return_bounds(series, profile, 2, model.valency, eps)
    ups = [r for r in reports if r.name == "return_probability"]
    assert ups and all(r.status is BoundStatus.SATISFIED for r in ups)
