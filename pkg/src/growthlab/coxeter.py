"""Growth series of affine Coxeter groups via Bott's product formula.

For an affine group of rank d with exponents m_1 < ... < m_d, the
cumulative growth series with respect to the Coxeter generators is

    sum_n s_n z^n = 1/(1-z)^(d+1) * prod_i (1 - z^(m_i+1)) / (1 - z^(m_i)),

an exact integer power series.  The n -> infinity limit of s_n / n^d
equals (1/d!) prod_i (m_i + 1)/m_i, an exact rational that gives the best
known upper bounds for the minimal growth constant mg(d) in several
degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import gmpy2

from . import bounds, tower
from .errors import UnknownFamily
from .tower import TowerReal


@dataclass(frozen=True)
class CoxeterDatum:
    name: str
    rank: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != self.rank:
            raise ValueError("need exactly one exponent per rank")
        if any(m < 1 for m in self.exponents):
            raise ValueError("exponents are positive")
        if list(self.exponents) != sorted(set(self.exponents)):
            raise ValueError("exponents must be strictly increasing")


@dataclass(frozen=True)
class GrowthSeries:
    cumulative: Tuple[int, ...]  # s_0 .. s_N

    def __post_init__(self):
        assert self.cumulative[0] == 1

    def size(self, n: int) -> int:
        return self.cumulative[n]

    @property
    def truncation(self) -> int:
        return len(self.cumulative) - 1


def _mul_one_minus_zk(coeffs: list, k: int) -> None:
    # multiply by (1 - z^k) in place
    for i in range(len(coeffs) - 1, k - 1, -1):
        coeffs[i] -= coeffs[i - k]


def _div_one_minus_zk(coeffs: list, k: int) -> None:
    # divide by (1 - z^k) in place: prefix-sum recurrence
    for i in range(k, len(coeffs)):
        coeffs[i] += coeffs[i - k]


def bott_cumulative_series(datum: CoxeterDatum, truncation: int) -> GrowthSeries:
    """Exact coefficients s_0..s_N of the cumulative growth series."""
    if truncation < 0:
        raise ValueError("truncation degree must be nonnegative")
    n = truncation + 1
    coeffs = [0] * n
    coeffs[0] = 1
    for m in datum.exponents:
        if m + 1 < n:
            _mul_one_minus_zk(coeffs, m + 1)
        _div_one_minus_zk(coeffs, m)
    for _ in range(datum.rank + 1):
        _div_one_minus_zk(coeffs, 1)
    return GrowthSeries(tuple(coeffs))


def asymptotic_constant(datum: CoxeterDatum) -> Fraction:
    """Exact limit of s_n / n^rank: (1/rank!) prod (m_i + 1)/m_i."""
    out = Fraction(1, int(gmpy2.fac(datum.rank)))
    for m in datum.exponents:
        out *= Fraction(m + 1, m)
    return out


# ---------------------------------------------------------------------------
# built-in exponent tables
# ---------------------------------------------------------------------------

# published asymptotic constants used as build-time guards for the tables
_EXPECTED_CONSTANTS: Dict[str, Fraction] = {
    "Gtilde2": Fraction(12, 5) / 2,
    "Etilde6": Fraction(324, 77) / int(gmpy2.fac(6)),
    "Etilde7": Fraction(9216, 2431) / int(gmpy2.fac(7)),
    "Etilde8": Fraction(99532800, 30808063) / int(gmpy2.fac(8)),
}

_EXCEPTIONAL_EXPONENTS: Dict[str, Tuple[int, ...]] = {
    "Gtilde2": (1, 5),
    "Etilde6": (1, 4, 5, 7, 8, 11),
    "Etilde7": (1, 5, 7, 9, 11, 13, 17),
    "Etilde8": (1, 7, 11, 13, 17, 19, 23, 29),
}


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def builtin(name: str, rank: Optional[int] = None) -> CoxeterDatum:
    """Built-in family by name: ``Btilde`` (rank >= 2) or Gtilde2/Etilde6/7/8.

    The exceptional tables are cross-checked against their published
    asymptotic constants; a mismatch is a hard error.
    """
    if name == "Btilde":
        if rank is None or rank < 2:
            raise UnknownFamily("Btilde needs a rank of at least 2")
        datum = CoxeterDatum(f"Btilde{rank}", rank, tuple(range(1, 2 * rank, 2)))
        expected = Fraction(double_factorial(2 * rank), double_factorial(2 * rank - 1))
        expected /= int(gmpy2.fac(rank))
        if asymptotic_constant(datum) != expected:
            raise AssertionError(f"exponent table for {datum.name} fails its cross-check")
        return datum
    if name in _EXCEPTIONAL_EXPONENTS:
        if rank is not None and rank != len(_EXCEPTIONAL_EXPONENTS[name]):
            raise UnknownFamily(f"{name} has fixed rank {len(_EXCEPTIONAL_EXPONENTS[name])}")
        datum = CoxeterDatum(name, len(_EXCEPTIONAL_EXPONENTS[name]), _EXCEPTIONAL_EXPONENTS[name])
        if asymptotic_constant(datum) != _EXPECTED_CONSTANTS[name]:
            raise AssertionError(f"exponent table for {name} fails its cross-check")
        return datum
    raise UnknownFamily(f"no built-in Coxeter family named {name!r}")


# ---------------------------------------------------------------------------
# the minimal-growth-constant window
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinGrowthWindow:
    """Certified window for mg(d) = inf s_n / n^d over degree-d groups."""

    degree: int
    lower: Optional[TowerReal]
    upper: Fraction
    upper_witness: str


def mg_window(d: int, C: int = 100, prec: int = tower.DEFAULT_PRECISION) -> MinGrowthWindow:
    """Window for mg(d): the effective growth constant from below, the best
    built-in Coxeter group (or the standard free abelian limit 2^d/d!) from above."""
    if d < 1:
        raise ValueError("degree must be positive")
    candidates = [(Fraction(2**d, int(gmpy2.fac(d))), f"Z^{d}")]
    if d >= 2:
        bt = builtin("Btilde", d)
        candidates.append((asymptotic_constant(bt), bt.name))
    for name, exps in _EXCEPTIONAL_EXPONENTS.items():
        if len(exps) == d:
            candidates.append((asymptotic_constant(builtin(name)), name))
    upper, witness = min(candidates)
    eps = bounds.min_growth_constant(d, C, prec)
    return MinGrowthWindow(d, eps.value, upper, witness)
