"""Tower-interval arithmetic: enclosure soundness and comparison stability."""

import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest

from growthlab import tower as tw
from growthlab.errors import DomainError, NonPositiveInput, PrecisionLossError
from growthlab.tower import Comparison

from towertrees import contains, random_tree as _random_tree

mpmath.mp.dps = 500


def test_integer_and_rational_constructors_exact():
    one = tw.from_integer(1)
    assert one.height == 0 and one.lo == one.hi == 1
    q = tw.from_rational(Fraction(3, 4))
    assert q.lo == q.hi == gmpy2.mpfr("0.75")
    with pytest.raises(NonPositiveInput):
        tw.from_integer(0)
    with pytest.raises(NonPositiveInput):
        tw.from_rational(Fraction(-1, 2))


def test_factorial_exact_small():
    f = tw.from_factorial(16)
    assert f.is_exact and int(f.lo) == 20922789888000


def test_factorial_200_log10():
    lo, hi = tw.log10_interval(tw.from_factorial(200))
    assert 374 <= float(lo) <= float(hi) <= 375
    oracle = mpmath.log10(mpmath.factorial(200))
    assert float(lo) <= float(oracle) <= float(hi)


def test_factorial_stirling_consistent_with_exact():
    # force the Stirling path and compare against the exact log-gamma
    k = 2 * 10**6
    stirl = tw.from_factorial(k)
    oracle = mpmath.loggamma(k + 1)
    got = tw._log_of(stirl, 128)
    assert got[0] == "n"
    assert float(got[1]) <= float(oracle) <= float(got[2])


def test_pow_8_100():
    p = tw.pow_tower(tw.from_integer(8), 100)
    lo, hi = tw.log10_interval(p)
    assert 90.3 <= float(lo) <= float(hi) <= 90.4


def test_mul_identity_and_exact_equality():
    x = tw.exp(tw.exp(tw.from_integer(3)))
    assert tw.mul(x, tw.from_integer(1)) is x
    assert tw.compare(x, x) is Comparison.EQUAL


def test_mul_encloses_exp_sum():
    for a, b in [(1, 1), (10, 10), (100, 100), (1, 100)]:
        m = tw.mul(tw.exp(tw.from_integer(a)), tw.exp(tw.from_integer(b)))
        oracle = mpmath.exp(a + b)
        assert contains(m, oracle)


def test_double_reciprocal_is_identity():
    x = tw.exp(tw.exp(tw.exp(tw.from_integer(77))))
    back = x.reciprocal().reciprocal()
    assert not back.recip
    assert (back.height, back.lo, back.hi) == (x.height, x.lo, x.hi)


def test_div_and_reciprocal_roundtrip():
    x = tw.from_rational(Fraction(7, 3))
    r = x.reciprocal()
    assert contains(r, mpmath.mpf(3) / 7)
    y = tw.div(tw.from_integer(10), tw.from_integer(4))
    assert contains(y, mpmath.mpf("2.5"))
    back = tw.mul(x, r)
    assert contains(back, mpmath.mpf(1))


def test_ln_exp_roundtrip_heights():
    x = tw.from_rational(Fraction(7, 2))
    for height in range(1, 5):
        t = x
        for _ in range(height):
            t = tw.exp(t)
        for _ in range(height):
            t = tw.ln(t)
        assert float(t.lo) <= 3.5 <= float(t.hi)


def test_ln_domain_errors():
    with pytest.raises(DomainError):
        tw.ln(tw.from_integer(1))
    with pytest.raises(DomainError):
        tw.ln(tw.from_rational(Fraction(1, 2)))
    # reciprocal form returns the magnitude of the logarithm
    tiny = tw.exp(tw.from_integer(50)).reciprocal()
    mag = tw.ln(tiny)
    assert float(mag.lo) <= 50 <= float(mag.hi)


def test_compare_exp_exp_100_vs_power_of_ten():
    a = tw.exp(tw.exp(tw.from_integer(100)))
    b = tw.pow_tower(tw.from_integer(10), 43)
    assert tw.compare(a, b) is Comparison.GREATER


def test_compare_monotone_in_top_exponent():
    e8 = tw.pow_tower(tw.from_integer(8), 100)
    small = tw.mul(tw.from_integer(17), tw.exp(tw.mul(tw.from_integer(10), e8)))
    large = tw.mul(tw.from_integer(17), tw.exp(tw.mul(tw.from_integer(100), e8)))
    assert tw.compare(small, large) is Comparison.LESS


def test_compare_against_one():
    tiny = tw.exp(tw.exp(tw.from_integer(100))).reciprocal()
    one = tw.from_integer(1)
    assert tw.compare(tiny, one) is Comparison.LESS
    assert tw.compare(one, tiny) is Comparison.GREATER
    huge = tw.exp(tw.exp(tw.exp(tw.from_integer(100))))
    assert tw.compare(one, huge) is Comparison.LESS


def test_compare_decided_antisymmetric_transitive():
    vals = [
        tw.from_integer(2),
        tw.exp(tw.from_integer(2)),
        tw.exp(tw.exp(tw.from_integer(2))),
        tw.exp(tw.exp(tw.exp(tw.from_integer(2)))),
        tw.from_rational(Fraction(1, 3)),
    ]
    for i, a in enumerate(vals):
        for j, b in enumerate(vals):
            ab, ba = tw.compare(a, b), tw.compare(b, a)
            if ab is Comparison.LESS:
                assert ba is Comparison.GREATER
            if ab is Comparison.GREATER:
                assert ba is Comparison.LESS
    # transitivity on a decided chain
    assert tw.compare(vals[0], vals[1]) is Comparison.LESS
    assert tw.compare(vals[1], vals[2]) is Comparison.LESS
    assert tw.compare(vals[0], vals[2]) is Comparison.LESS


def test_add_and_sub_enclosures():
    a = tw.from_rational(Fraction(5, 2))
    b = tw.from_rational(Fraction(1, 3))
    assert contains(tw.add(a, b), mpmath.mpf(5) / 2 + mpmath.mpf(1) / 3)
    assert contains(tw.sub(a, b), mpmath.mpf(5) / 2 - mpmath.mpf(1) / 3)
    big = tw.exp(tw.exp(tw.from_integer(100)))
    widened = tw.add(big, tw.from_integer(5))
    # absorption widens, never narrows
    assert widened.lo <= big.lo and widened.hi >= big.hi
    with pytest.raises(PrecisionLossError):
        tw.sub(big, tw.mul(big, tw.from_integer(1)))


def test_sub_rejects_nonpositive_difference():
    with pytest.raises(PrecisionLossError):
        tw.sub(tw.from_integer(3), tw.from_integer(5))


def test_add_of_incomparable_towers_encloses_double():
    # separately built equal towers compare UNDECIDED; the coarse sum
    # enclosure must still contain 2x
    x = tw.exp(tw.exp(tw.exp(tw.from_integer(100))))
    y = tw.exp(tw.exp(tw.exp(tw.from_integer(100))))
    assert tw.compare(x, y) is Comparison.UNDECIDED
    s = tw.add(x, y)
    double = tw._match_height(tw.mul(x, tw.from_integer(2)), s.height, 256)
    assert s.lo <= double.lo and double.hi <= s.hi


def test_absorb_widening_covers_margin():
    # absorbing a negligible addend must widen by the full certificate
    # margin 2^-(prec+4), not a single ulp
    big = tw.exp(tw.exp(tw.exp(tw.from_integer(50))))
    tiny = big.reciprocal()
    s = tw.add(tw.from_integer(5), tiny)
    assert s.height == 0 and s.lo <= 5
    margin = Fraction(1, 2 ** (tw.DEFAULT_PRECISION + 4))
    assert float(s.hi) >= float(5 * (1 + margin))


def test_parse_format_roundtrip_contains_value():
    cases = [
        tw.from_rational(Fraction(22, 7)),
        tw.exp(tw.exp(tw.from_integer(100))),
        tw.exp(tw.exp(tw.exp(tw.from_integer(212)))).reciprocal(),
    ]
    for t in cases:
        s = tw.format_tower(t, 25)
        back = tw.parse_tower(s)
        assert back.recip == t.recip and back.height == t.height
        assert back.lo <= t.lo and t.hi <= back.hi  # sound widening


def test_notation_shapes():
    assert tw.format_tower(tw.from_integer(3)).startswith("E^0[")
    tiny = tw.exp(tw.exp(tw.from_integer(100))).reciprocal()
    assert tw.format_tower(tiny).startswith("1/E^")


# ---------------------------------------------------------------------------
# randomized expression trees: refinement stability + oracle agreement
# ---------------------------------------------------------------------------


def test_thousand_random_trees_stable_and_oracle_checked():
    rng = random.Random(20240817)
    built = []
    while len(built) < 1000:
        fn, oracle = _random_tree(rng, rng.randint(1, 6))
        try:
            low = fn(128)
        except (PrecisionLossError, NonPositiveInput, DomainError,
                gmpy2.OverflowResultError, gmpy2.UnderflowResultError):
            continue
        built.append((fn, oracle, low))
    checked_oracle = 0
    for fn, oracle, low in built:
        if oracle is not None and tw._flatten(low, 4096) is not None:
            assert contains(low, oracle), tw.format_tower(low, 30)
            checked_oracle += 1
    assert checked_oracle >= 400

    flips = 0
    decided = 0
    rng2 = random.Random(99)
    pairs = [(rng2.randrange(1000), rng2.randrange(1000)) for _ in range(500)]
    for i, j in pairs:
        fa, _, la = built[i]
        fb, _, lb = built[j]
        low_cmp = tw.compare(la, lb)
        try:
            high_cmp = tw.compare(fa(256), fb(256))
        except (PrecisionLossError, gmpy2.OverflowResultError, gmpy2.UnderflowResultError):
            continue
        if low_cmp is not Comparison.UNDECIDED:
            decided += 1
            if high_cmp is not low_cmp:
                flips += 1
            assert tw.compare(lb, la) is low_cmp.reversed()
    assert flips == 0
    assert decided >= 200
