"""Adversarial stress tests for the tower-interval arithmetic.

The invariant under attack: a decided comparison is never wrong, at any
precision, for values engineered to be barely distinguishable or to walk
rarely-used code paths (near-1 operands, log-space cancellation, deep
reciprocals).
"""

import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest

from growthlab import tower as tw
from growthlab.errors import DomainError, NonPositiveInput, PrecisionLossError
from growthlab.tower import Comparison

mpmath.mp.dps = 300


def true_direction(oa, ob):
    if oa < ob:
        return Comparison.LESS
    if oa > ob:
        return Comparison.GREATER
    return Comparison.EQUAL


def test_close_pairs_never_decided_wrong():
    rng = random.Random(5151)
    for _ in range(300):
        base_num = rng.randint(2, 10**6)
        base_den = rng.randint(1, 10**6)
        a = Fraction(base_num, base_den) + 1
        # perturb at a random decimal scale, sometimes exactly zero
        scale = rng.randint(1, 60)
        delta = Fraction(rng.randint(-5, 5), 10**scale)
        b = a + delta
        depth = rng.randint(0, 2)
        ta, tb = tw.from_rational(a), tw.from_rational(b)
        oa = mpmath.mpf(a.numerator) / a.denominator
        ob = mpmath.mpf(b.numerator) / b.denominator
        for _ in range(depth):
            ta, tb = tw.exp(ta), tw.exp(tb)
            oa, ob = mpmath.exp(oa) if oa < 700 else None, mpmath.exp(ob) if ob < 700 else None
            if oa is None or ob is None:
                break
        got = tw.compare(ta, tb)
        if got is Comparison.UNDECIDED:
            continue
        if oa is not None and ob is not None:
            assert got is true_direction(oa, ob), (a, delta, depth, got)
        else:
            # beyond the oracle range the exact rational order still decides it
            assert got is true_direction(a, b), (a, delta, depth, got)


def test_deep_towers_with_tiny_mantissa_gap():
    # exp^3(x) vs exp^3(x + 2^-100): decidable at high precision, and the
    # decided direction must be LESS
    x = Fraction(50)
    gap = Fraction(1, 2**100)

    def left(p):
        return tw.exp(tw.exp(tw.exp(tw.from_rational(x, p), p), p), p)

    def right(p):
        return tw.exp(tw.exp(tw.exp(tw.from_rational(x + gap, p), p), p), p)

    assert tw.compare_refining(left, right) is Comparison.LESS
    # and the same at equal arguments stays undecided rather than guessing
    assert tw.compare_refining(left, left) in (Comparison.UNDECIDED, Comparison.EQUAL)


def test_reciprocal_chains():
    # 1/(1/(1/x)) == 1/x structurally and semantically
    x = tw.exp(tw.exp(tw.from_integer(333)))
    r3 = x.reciprocal().reciprocal().reciprocal()
    assert r3.recip
    assert tw.compare(r3, x.reciprocal()) in (Comparison.EQUAL, Comparison.UNDECIDED)
    assert tw.compare(r3, x) is Comparison.LESS


def _tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            n = rng.randint(1, 30)
            return (lambda p, n=n: tw.from_integer(n, p)), mpmath.mpf(n)
        num, den = rng.randint(1, 40), rng.randint(1, 40)
        return (lambda p, a=num, b=den: tw.from_rational(Fraction(a, b), p)), mpmath.mpf(num) / den
    op = rng.choice(["mul", "add", "sub", "div", "exp", "ln", "recip", "pow", "sqrt"])
    f1, o1 = _tree(rng, depth - 1)
    if op in ("mul", "add", "sub", "div"):
        f2, o2 = _tree(rng, depth - 1)
        oracle = None
        if o1 is not None and o2 is not None:
            oracle = {"mul": o1 * o2, "add": o1 + o2,
                      "sub": o1 - o2, "div": o1 / o2}[op]
            if op == "sub" and oracle <= 0:
                oracle = None
        fn = {"mul": tw.mul, "add": tw.add, "sub": tw.sub, "div": tw.div}[op]
        return (lambda p, fn=fn: fn(f1(p), f2(p), p)), oracle
    if op == "exp":
        oracle = mpmath.exp(o1) if o1 is not None and abs(o1) < 400 else None
        return (lambda p: tw.exp(f1(p), p)), oracle
    if op == "ln":
        oracle = mpmath.log(o1) if o1 is not None and o1 > 1 else None
        return (lambda p: tw.ln(f1(p), p)), oracle
    if op == "recip":
        return (lambda p: f1(p).reciprocal()), (None if o1 is None else 1 / o1)
    if op == "pow":
        e = rng.randint(2, 4)
        oracle = None
        if o1 is not None and abs(mpmath.log(o1 + mpmath.mpf("1e-300"))) * e < 700:
            oracle = o1**e
        return (lambda p, e=e: tw.pow_tower(f1(p), e, p)), oracle
    return (lambda p: tw.sqrt(f1(p), p)), (None if o1 is None else mpmath.sqrt(o1))


def test_wide_op_fuzz_encloses_oracle():
    rng = random.Random(777)
    checked = 0
    attempts = 0
    while checked < 400 and attempts < 5000:
        attempts += 1
        fn, oracle = _tree(rng, rng.randint(1, 5))
        if oracle is None or not (mpmath.mpf("1e-250") < abs(oracle) < mpmath.mpf("1e250")):
            continue
        try:
            val = fn(128)
        except (PrecisionLossError, NonPositiveInput, DomainError,
                gmpy2.OverflowResultError, gmpy2.UnderflowResultError):
            continue
        flat = tw._flatten(val, 512)
        if flat is None:
            continue
        lo = mpmath.mpf(tw._fmt_mpfr(flat[0], 120))
        hi = mpmath.mpf(tw._fmt_mpfr(flat[1], 120))
        pad = (abs(lo) + abs(hi)) * mpmath.mpf(10) ** (-115) + mpmath.mpf(10) ** (-250)
        assert lo - pad <= oracle <= hi + pad, (oracle, tw.format_tower(val, 25))
        checked += 1
    assert checked >= 400


def test_subtraction_with_oracle_direction():
    # a - b enclosures, including barely-positive differences
    rng = random.Random(31337)
    for _ in range(200):
        b = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        gap = Fraction(rng.randint(1, 100), 10 ** rng.randint(0, 25))
        a = b + gap
        try:
            out = tw.sub(tw.from_rational(a), tw.from_rational(b))
        except PrecisionLossError:
            # legal when the gap is below interval resolution
            assert gap / a < Fraction(1, 2**120)
            continue
        oracle = mpmath.mpf(gap.numerator) / gap.denominator
        flat = tw._flatten(out, 512)
        lo = mpmath.mpf(tw._fmt_mpfr(flat[0], 120))
        hi = mpmath.mpf(tw._fmt_mpfr(flat[1], 120))
        pad = (abs(hi) + 1) * mpmath.mpf(10) ** (-110)
        assert lo - pad <= oracle <= hi + pad
