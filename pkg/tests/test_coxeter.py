"""Coxeter growth series and asymptotic constants."""

from fractions import Fraction
from math import factorial

import pytest

from growthlab import tower
from growthlab.coxeter import (
    CoxeterDatum,
    asymptotic_constant,
    bott_cumulative_series,
    builtin,
    double_factorial,
    mg_window,
)
from growthlab.errors import UnknownFamily
from growthlab.tower import Comparison


def series_oracle(datum: CoxeterDatum, N: int):
    """Expand the product formula with plain Fraction polynomial division."""
    # numerator prod (1 - z^(m+1)); denominator (1-z)^(rank+1) prod (1 - z^m)
    def poly_mul(a, b):
        out = [0] * min(len(a) + len(b) - 1, N + 1)
        for i, x in enumerate(a):
            if x == 0 or i > N:
                continue
            for j, y in enumerate(b):
                if i + j > N:
                    break
                out[i + j] += x * y
        return out

    num = [1]
    den = [1]
    for m in datum.exponents:
        e1 = [0] * (m + 2)
        e1[0], e1[m + 1] = 1, -1
        num = poly_mul(num, e1)
        e2 = [0] * (m + 1)
        e2[0], e2[m] = 1, -1
        den = poly_mul(den, e2)
    for _ in range(datum.rank + 1):
        den = poly_mul(den, [1, -1])
    num += [0] * (N + 1 - len(num))
    den += [0] * (N + 1 - len(den))
    out = []
    for n in range(N + 1):
        acc = Fraction(num[n])
        for k in range(1, n + 1):
            if k < len(den):
                acc -= den[k] * out[n - k]
        out.append(acc / den[0])
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


def test_btilde2_low_coefficients():
    series = bott_cumulative_series(builtin("Btilde", 2), 6)
    assert series.size(0) == 1
    assert series.size(1) == 4
    assert list(series.cumulative) == series_oracle(builtin("Btilde", 2), 6)


def test_truncation_zero():
    assert list(bott_cumulative_series(builtin("Btilde", 3), 0).cumulative) == [1]


def test_btilde2_series_against_oracle_to_50():
    datum = builtin("Btilde", 2)
    series = bott_cumulative_series(datum, 50)
    assert list(series.cumulative) == series_oracle(datum, 50)
    diffs = [series.size(n + 1) - series.size(n) for n in range(50)]
    assert all(d > 0 for d in diffs)


def test_exceptional_series_against_oracle():
    for name in ("Gtilde2", "Etilde6"):
        datum = builtin(name)
        series = bott_cumulative_series(datum, 30)
        assert list(series.cumulative) == series_oracle(datum, 30)


def test_general_product_matches_btilde_display_form():
    # the generic exponent product with m_i = 2i-1 must reproduce the
    # explicit (1-z^2k)/(1-z^(2k-1)) display identically
    for d in (2, 3, 4):
        datum = builtin("Btilde", d)
        generic = bott_cumulative_series(datum, 200)
        explicit = series_oracle(datum, 200)
        assert list(generic.cumulative) == explicit


def test_asymptotic_constants_published_values():
    assert asymptotic_constant(builtin("Gtilde2")) == Fraction(12, 5) / factorial(2)
    assert asymptotic_constant(builtin("Etilde6")) == Fraction(324, 77) / factorial(6)
    assert asymptotic_constant(builtin("Etilde7")) == Fraction(9216, 2431) / factorial(7)
    assert asymptotic_constant(builtin("Etilde8")) == Fraction(99532800, 30808063) / factorial(8)


def test_btilde_double_factorial_formula():
    for d in range(2, 21):
        expected = Fraction(double_factorial(2 * d), double_factorial(2 * d - 1)) / factorial(d)
        assert asymptotic_constant(builtin("Btilde", d)) == expected


def test_double_factorial():
    assert double_factorial(10) == 3840
    assert double_factorial(9) == 945
    assert double_factorial(0) == 1


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        builtin("Ftilde4")
    with pytest.raises(UnknownFamily):
        builtin("Btilde", 1)


def test_convergence_to_constant_btilde2():
    datum = builtin("Btilde", 2)
    series = bott_cumulative_series(datum, 2000)
    limit = asymptotic_constant(datum)
    ratio = Fraction(series.size(2000), 2000**2) / limit
    assert Fraction(9, 10) < ratio < Fraction(11, 10)


def test_mg_window_values():
    w1 = mg_window(1)
    assert w1.upper == 2
    w2 = mg_window(2)
    assert w2.upper == Fraction(6, 5)
    assert w2.upper_witness == "Gtilde2"
    w5 = mg_window(5)
    assert w5.upper == Fraction(3840, 945) / factorial(5)


def test_mg_window_certified_lower_below_upper():
    for d in range(1, 9):
        w = mg_window(d)
        assert w.lower is not None
        assert tower.compare(w.lower, tower.from_rational(w.upper)) is Comparison.LESS


def test_mg_window_exceptional_degrees_beat_btilde():
    for d, name in ((6, "Etilde6"), (7, "Etilde7"), (8, "Etilde8")):
        w = mg_window(d)
        assert w.upper_witness == name
        assert w.upper < asymptotic_constant(builtin("Btilde", d))


def test_datum_validation():
    with pytest.raises(ValueError):
        CoxeterDatum("bad", 2, (3, 1))
    with pytest.raises(ValueError):
        CoxeterDatum("bad", 2, (1,))
