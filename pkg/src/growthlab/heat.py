"""Exact heat kernels of the lazy simple random walk on Cayley graphs.

The walk holds with probability 1/2 and otherwise moves along one of the
Δ distinct non-identity symmetric generators, each with probability
1/(2Δ).  All probabilities are exact rationals; after t steps the support
lies inside the ball of radius t, so computing on the enumerated ball is
lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from . import bounds, tower
from .bounds import BoundReport
from .errors import BudgetExceeded
from .groups import DEFAULT_BUDGET, BallProfile, GroupModel
from .tower import TowerReal


@dataclass(frozen=True)
class Distribution:
    """Exact probability mass by group element (elements are hashable values)."""

    support: Dict[object, Fraction]

    def __post_init__(self):
        assert sum(self.support.values()) == 1

    def mass_at(self, g) -> Fraction:
        return self.support.get(g, Fraction(0))


def point_mass(model: GroupModel) -> Distribution:
    return Distribution({model.identity: Fraction(1)})


def lazy_step(model: GroupModel, dist: Distribution) -> Distribution:
    delta = model.valency
    move = Fraction(1, 2 * delta)
    hold = Fraction(1, 2)
    out: Dict[object, Fraction] = {}
    for g, p in dist.support.items():
        out[g] = out.get(g, Fraction(0)) + p * hold
        for x in model.generators:
            h = model.compose(g, x)
            out[h] = out.get(h, Fraction(0)) + p * move
    return Distribution(out)


@dataclass(frozen=True)
class HeatSeries:
    """Return probabilities p_0..p_T at the identity."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        assert self.values[0] == 1

    def at(self, t: int) -> Fraction:
        return self.values[t]

    @property
    def steps(self) -> int:
        return len(self.values) - 1


def return_series(model: GroupModel, steps: int,
                  budget: int = DEFAULT_BUDGET) -> HeatSeries:
    """Exact p_t(o, o) for t = 0..steps."""
    if steps < 0:
        raise ValueError("step count must be nonnegative")
    dist = point_mass(model)
    values = [Fraction(1)]
    for _ in range(steps):
        dist = lazy_step(model, dist)
        if len(dist.support) > budget:
            raise BudgetExceeded(completed_radius=len(values) - 1, budget=budget)
        values.append(dist.mass_at(model.identity))
    return HeatSeries(tuple(values))


def walk_distributions(model: GroupModel, steps: int,
                       budget: int = DEFAULT_BUDGET) -> List[Distribution]:
    dists = [point_mass(model)]
    for _ in range(steps):
        dists.append(lazy_step(model, dists[-1]))
        if len(dists[-1].support) > budget:
            raise BudgetExceeded(completed_radius=len(dists) - 2, budget=budget)
    return dists


def measured_growth_constant(profile: BallProfile, d: int) -> Fraction:
    """min_n s_n / n^d over the profile: the strongest testable constant."""
    return min(Fraction(profile.size(n), n**d) for n in range(1, profile.radius + 1))


def check_return_bounds(series: HeatSeries, profile: BallProfile, d: int,
                        valency: int, c: Union[Fraction, TowerReal],
                        prec: int = tower.DEFAULT_PRECISION) -> List[BoundReport]:
    """Certify the heat-kernel inequalities for every computed step.

    For each t: the upper bound 8 d^((d+5)/2) Δ^(d/2) / (c e^(d/2) t^(d/2))
    on p_t(o,o), and the spectral lower bound p_2t(o,o) >= 1/s_t.
    """
    reports = []
    for t in range(1, series.steps + 1):
        bound = bounds.return_probability_bound(d, valency, t, c, prec)
        reports.append(BoundReport.check_upper(
            "return_probability", {"d": d, "valency": valency, "t": t},
            bound, series.at(t)))
    for t in range(1, series.steps // 2 + 1):
        floor = Fraction(1, profile.size(t))
        reports.append(BoundReport.check_lower(
            "spectral_floor", {"t": t}, floor, series.at(2 * t)))
    return reports
