"""Rank vectors of nilpotent groups: growth degree, Hirsch length, validators,
and exact multilinearity checks for simple commutators in matrix models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import ArityMismatch, DegreeTooSmall
from .groups import GroupModel
from .words import simple_commutator


@dataclass(frozen=True)
class RankVector:
    """Torsion-free ranks r(1)..r(c) of the lower-central-series quotients."""

    ranks: Tuple[int, ...]

    def __post_init__(self):
        if not self.ranks:
            raise ValueError("rank vector must be non-empty")
        if any(r < 0 for r in self.ranks):
            raise ValueError("ranks are nonnegative")

    @property
    def nilpotency_class(self) -> int:
        return len(self.ranks)


def growth_degree(rv: RankVector) -> int:
    """Degree of polynomial growth: sum of i * r(i)."""
    return sum(i * r for i, r in enumerate(rv.ranks, start=1))


def hirsch_length(rv: RankVector) -> int:
    """Sum of the ranks; always satisfies h <= degree <= h * class."""
    h = sum(rv.ranks)
    d = growth_degree(rv)
    assert h <= d <= h * rv.nilpotency_class
    return h


@dataclass(frozen=True)
class RankVectorReport:
    valid: bool
    violations: Tuple[str, ...]


def validate_torsion_free(rv: RankVector, noncyclic: bool) -> RankVectorReport:
    """Checks a rank vector against the constraints of torsion-free nilpotent groups.

    Every quotient of the lower central series of a torsion-free nilpotent
    group of class c has rank at least 1, and a noncyclic group has
    r(1) >= 2 (r(1) = 1 forces the whole group to be infinite cyclic).
    """
    violations: List[str] = []
    for i, r in enumerate(rv.ranks, start=1):
        if r < 1:
            violations.append(f"r({i}) = {r} < 1")
    if noncyclic and rv.ranks[0] < 2:
        violations.append(f"r(1) = {rv.ranks[0]} < 2 for a noncyclic group")
    return RankVectorReport(valid=not violations, violations=tuple(violations))


def max_class(d: int) -> int:
    """Largest nilpotency class c with c(c+1) <= 2d - 2 at growth degree d."""
    if d < 2:
        raise DegreeTooSmall("class bound requires degree >= 2")
    c = int(math.isqrt(2 * d - 2))
    while c * (c + 1) > 2 * d - 2:
        c -= 1
    while (c + 1) * (c + 2) <= 2 * d - 2:
        c += 1
    return c


def power(model: GroupModel, g, e: int):
    """g**e with exact arithmetic, e any integer."""
    if e < 0:
        return power(model, model.inverse(g), -e)
    out = model.identity
    base = g
    while e:
        if e & 1:
            out = model.compose(out, base)
        base = model.compose(base, base)
        e >>= 1
    return out


def multilinearity_check(model: GroupModel, elements: Sequence, exponents: Sequence[int]) -> bool:
    """Whether [x_1^{e_1}, ..., x_c^{e_c}] equals [x_1, ..., x_c]^(prod e_i).

    The caller asserts the model is nilpotent of class exactly c = len(elements),
    in which case weight-c commutators are central and the identity must hold.
    """
    if len(elements) != len(exponents):
        raise ArityMismatch(
            f"{len(elements)} elements but {len(exponents)} exponents"
        )
    powered = [power(model, g, e) for g, e in zip(elements, exponents)]
    lhs = simple_commutator(model, powered)
    prod = 1
    for e in exponents:
        prod *= e
    rhs = power(model, simple_commutator(model, list(elements)), prod)
    return model.key(lhs) == model.key(rhs)
