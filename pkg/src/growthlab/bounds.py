"""Closed-form growth constants and criteria, evaluated exactly.

Rational bounds are plain ``Fraction`` values; constants too large for any
fixed-precision representation come back as :class:`TowerReal` enclosures.
Everywhere the maximum order g(k) of a finite subgroup of GL_k(Z) appears,
it is replaced by the Minkowski bound (2k)!, which weakens lower bounds
but preserves their validity; callers may supply a table of exact g(k)
values to tighten specific arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import gmpy2

from . import tower
from .groups import BallProfile
from .tower import Comparison, TowerReal

Bound = Union[Fraction, TowerReal]


def minkowski_bound(k: int) -> int:
    """(2k)!, an upper bound for the order of any finite subgroup of GL_k(Z)."""
    if k < 1:
        raise ValueError("dimension must be positive")
    return int(gmpy2.fac(2 * k))


def _g(k: int, g_table: Optional[Dict[int, int]] = None) -> int:
    if g_table and k in g_table:
        return g_table[k]
    return minkowski_bound(k)


def ball_floor_nilpotent(d: int, n: int) -> Fraction:
    """n^d / 2^(d^2): every nilpotent group of growth degree d has s_n at least this."""
    if d < 1 or n < 1:
        raise ValueError("degree and radius must be positive")
    return Fraction(n**d, 2 ** (d * d))


def ball_floor_virtually_nilpotent(d: int, h: int, n: int,
                                   g_table: Optional[Dict[int, int]] = None) -> Fraction:
    """n^d / (2^(d(d+2)) g(h)^d) for virtually nilpotent groups of degree d, Hirsch length h."""
    if d < 1 or h < 1 or n < 1:
        raise ValueError("parameters must be positive")
    return Fraction(n**d, 2 ** (d * (d + 2)) * _g(h, g_table) ** d)


def ball_floor_min_degree(d: int, n: int) -> Fraction:
    """n^d / 2^(floor(7d/4)^2) for nilpotent groups of growth degree at least d."""
    if d < 1 or n < 1:
        raise ValueError("degree and radius must be positive")
    e = (7 * d) // 4
    return Fraction(n**d, 2 ** (e * e))


def ball_floor_vertex_transitive(d: int, n: int,
                                 g_table: Optional[Dict[int, int]] = None) -> Fraction:
    """n^d / (2^(d(d+2)) g(d)^(d+1)) for vertex-transitive graphs of degree exactly d."""
    if d < 1 or n < 1:
        raise ValueError("degree and radius must be positive")
    return Fraction(n**d, 2 ** (d * (d + 2)) * _g(d, g_table) ** (d + 1))


# ---------------------------------------------------------------------------
# the effective minimal-growth constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinGrowthConstant:
    """min of the two branches, with the branch decision recorded.

    When the comparison cannot be decided, ``value`` is None and only the
    per-branch enclosures are usable.
    """

    value: Optional[TowerReal]
    branch: str  # "subgroup", "radius", or "undecided"
    subgroup_branch: TowerReal
    radius_branch: TowerReal


def _subgroup_branch(d: int, C: int, prec: int) -> TowerReal:
    # 1 / (2^(3 C^(4d)) * g(C^d)^(C^(2d)))
    p1 = tower.pow_tower(tower.from_integer(2, prec), 3 * C ** (4 * d), prec)
    p2 = tower.pow_tower(tower.from_factorial(2 * C**d, prec), C ** (2 * d), prec)
    return tower.mul(p1, p2, prec).reciprocal()


def _radius_branch(d: int, C: int, prec: int) -> TowerReal:
    # 1 / exp(d exp(C d^C))
    inner = tower.exp(tower.from_integer(C * d**C, prec), prec)
    return tower.exp(tower.mul(tower.from_integer(d, prec), inner, prec), prec).reciprocal()


def min_growth_constant(d: int, C: int = 100,
                        prec: int = tower.DEFAULT_PRECISION) -> MinGrowthConstant:
    """Effective constant c with s_n >= c n^d whenever the growth degree is >= d.

    The constant is the minimum of a branch controlled by the finite-subgroup
    bound and a branch controlled by the radius threshold of the finitary
    structure theorem; which branch wins is decided by certified comparison
    (retrying at doubled precision), or reported as undecided.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if C < 2:
        raise ValueError("structure constant must be at least 2")
    first = _subgroup_branch(d, C, prec)
    second = _radius_branch(d, C, prec)
    cmp = tower.compare_refining(lambda p: _subgroup_branch(d, C, p),
                                 lambda p: _radius_branch(d, C, p),
                                 start_prec=prec)
    if cmp is Comparison.LESS:
        return MinGrowthConstant(first, "subgroup", first, second)
    if cmp is Comparison.GREATER:
        return MinGrowthConstant(second, "radius", first, second)
    if cmp is Comparison.EQUAL:
        return MinGrowthConstant(first, "subgroup", first, second)
    return MinGrowthConstant(None, "undecided", first, second)


def return_probability_bound(d: int, valency: int, t: int, c,
                             prec: int = tower.DEFAULT_PRECISION) -> TowerReal:
    """Upper bound 8 d^((d+5)/2) Δ^(d/2) / (c e^(d/2)) t^(-d/2) for p_t(y, z).

    ``c`` is any growth constant with s_n >= c n^d (Fraction or TowerReal).
    The enclosure's upper endpoint is the certified bound.
    """
    if d < 1 or valency < 1 or t < 1:
        raise ValueError("parameters must be positive")
    c_t = c if isinstance(c, TowerReal) else tower.from_rational(Fraction(c), prec)
    num = tower.mul(
        tower.from_integer(8, prec),
        tower.mul(
            tower.pow_tower(tower.from_integer(d, prec), Fraction(d + 5, 2), prec),
            tower.pow_tower(tower.from_integer(valency, prec), Fraction(d, 2), prec),
            prec,
        ),
        prec,
    )
    e_half = tower.pow_tower(tower.exp(tower.from_integer(1, prec), prec), Fraction(d, 2), prec)
    t_half = tower.pow_tower(tower.from_integer(t, prec), Fraction(d, 2), prec)
    den = tower.mul(c_t, tower.mul(e_half, t_half, prec), prec)
    return tower.div(num, den, prec)


def integer_root_ceil(q: Fraction, d: int) -> int:
    """Smallest integer m with m^d >= q, by exact root extraction and correction."""
    if q <= 0:
        raise ValueError("radicand must be positive")
    if d < 1:
        raise ValueError("root index must be positive")
    est = int(gmpy2.iroot(gmpy2.mpz(q.numerator // q.denominator), d)[0])
    m = max(est, 1)
    while Fraction(m) ** d < q:
        m += 1
    while m > 1 and Fraction(m - 1) ** d >= q:
        m -= 1
    return m


@dataclass(frozen=True)
class IsoperimetricBounds:
    """Two lower bounds for |boundary A| at |A| = size and growth constant c."""

    csc_form: Fraction          # |A| / (2 ceil((2|A|/c)^(1/d)))
    power_form: TowerReal       # c^(1/d)/8 * |A|^((d-1)/d), certified from below


def isoperimetric_bounds(d: int, size: int, c: Fraction,
                         prec: int = tower.DEFAULT_PRECISION) -> IsoperimetricBounds:
    if d < 1 or size < 1 or c <= 0:
        raise ValueError("parameters must be positive")
    c = Fraction(c)
    csc = Fraction(size, 2 * integer_root_ceil(2 * size / c, d))
    power = tower.div(
        tower.mul(
            tower.pow_tower(tower.from_rational(c, prec), Fraction(1, d), prec),
            tower.pow_tower(tower.from_integer(size, prec), Fraction(d - 1, d), prec),
            prec,
        ),
        tower.from_integer(8, prec),
        prec,
    )
    return IsoperimetricBounds(csc, power)


# ---------------------------------------------------------------------------
# profile criteria
# ---------------------------------------------------------------------------


def linear_growth_criterion(profile: BallProfile) -> Optional[Tuple[int, int]]:
    """First n >= 1 with sphere a_n <= n, plus the cyclic-subgroup index bound a_n.

    A hit certifies a cyclic subgroup of index at most a_n (and hence
    linear growth); absence up to the profile radius proves nothing.
    """
    for n in range(1, profile.radius + 1):
        a_n = profile.sphere(n)
        if a_n <= n:
            return n, a_n
    return None


@dataclass(frozen=True)
class FinitenessReport:
    finite_at: Tuple[int, ...]            # n with s_n <= 2n: the group is finite
    virtually_cyclic_at: Tuple[int, ...]  # n with s_n < (n+1)(n+2)/2: linear growth

    @property
    def is_finite(self) -> bool:
        return bool(self.finite_at)

    @property
    def is_virtually_cyclic(self) -> bool:
        return bool(self.virtually_cyclic_at)


def finiteness_report(profile: BallProfile) -> FinitenessReport:
    finite = tuple(
        n for n in range(1, profile.radius + 1) if profile.size(n) <= 2 * n
    )
    vc = tuple(
        n
        for n in range(1, profile.radius + 1)
        if 2 * profile.size(n) < (n + 1) * (n + 2)
    )
    return FinitenessReport(finite, vc)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


class BoundStatus(Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class BoundReport:
    name: str
    params: Tuple[Tuple[str, object], ...]
    bound: Bound
    measured: Optional[Fraction]
    status: BoundStatus

    @staticmethod
    def check_lower(name: str, params: dict, bound: Bound, measured) -> "BoundReport":
        """Report whether measured >= bound (a lower-bound claim)."""
        measured = Fraction(measured)
        if isinstance(bound, Fraction):
            status = BoundStatus.SATISFIED if measured >= bound else BoundStatus.VIOLATED
        else:
            cmp = tower.compare(tower.from_rational(measured), bound)
            if cmp in (Comparison.GREATER, Comparison.EQUAL):
                status = BoundStatus.SATISFIED
            elif cmp is Comparison.LESS:
                status = BoundStatus.VIOLATED
            else:
                status = BoundStatus.UNDECIDED
        return BoundReport(name, tuple(sorted(params.items())), bound, measured, status)

    @staticmethod
    def check_upper(name: str, params: dict, bound: Bound, measured) -> "BoundReport":
        """Report whether measured <= bound (an upper-bound claim)."""
        measured = Fraction(measured)
        if isinstance(bound, Fraction):
            status = BoundStatus.SATISFIED if measured <= bound else BoundStatus.VIOLATED
        else:
            cmp = tower.compare(tower.from_rational(measured), bound)
            if cmp in (Comparison.LESS, Comparison.EQUAL):
                status = BoundStatus.SATISFIED
            elif cmp is Comparison.GREATER:
                status = BoundStatus.VIOLATED
            else:
                status = BoundStatus.UNDECIDED
        return BoundReport(name, tuple(sorted(params.items())), bound, measured, status)


def profile_floor_reports(profile: BallProfile, d: int, h: Optional[int] = None,
                          g_table: Optional[Dict[int, int]] = None) -> list:
    """Instantiate the nilpotent / virtually nilpotent floors against a profile."""
    reports = []
    for n in range(1, profile.radius + 1):
        s_n = profile.size(n)
        reports.append(BoundReport.check_lower(
            "nilpotent_floor", {"d": d, "n": n}, ball_floor_nilpotent(d, n), s_n))
        if h is not None:
            reports.append(BoundReport.check_lower(
                "virtually_nilpotent_floor", {"d": d, "h": h, "n": n},
                ball_floor_virtually_nilpotent(d, h, n, g_table), s_n))
    return reports
