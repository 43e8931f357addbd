"""Shared helpers: random tower expression trees and oracle containment."""

from fractions import Fraction

import mpmath

from growthlab import tower as tw

mpmath.mp.dps = 500


def contains(t, oracle, slack_digits=400):
    """oracle (mpmath mpf) lies in the enclosure of a height<=1 tower."""
    flat = tw._flatten(t, 4096)
    assert flat is not None, "value too large to check numerically"
    du = abs(oracle) * mpmath.mpf(10) ** (-slack_digits) + mpmath.mpf(10) ** (-slack_digits)
    lo = mpmath.mpf(tw._fmt_mpfr(flat[0], 160))
    hi = mpmath.mpf(tw._fmt_mpfr(flat[1], 160))
    pad = (abs(lo) + abs(hi) + 1) * mpmath.mpf(10) ** (-155)
    return lo - pad <= oracle + du and oracle - du <= hi + pad


def random_tree(rng, depth):
    """(evaluator(prec) -> TowerReal, mpmath oracle or None if too large)."""
    if depth == 0 or rng.random() < 0.3:
        kind = rng.choice(["int", "rat"])
        if kind == "int":
            n = rng.randint(1, 50)
            return (lambda p, n=n: tw.from_integer(n, p)), mpmath.mpf(n)
        num, den = rng.randint(1, 60), rng.randint(1, 60)
        return (lambda p, a=num, b=den: tw.from_rational(Fraction(a, b), p)), mpmath.mpf(num) / den
    op = rng.choice(["mul", "add", "exp", "recip", "pow", "sqrt"])
    f1, o1 = random_tree(rng, depth - 1)
    if op == "mul":
        f2, o2 = random_tree(rng, depth - 1)
        oracle = None if o1 is None or o2 is None else o1 * o2
        return (lambda p: tw.mul(f1(p), f2(p), p)), oracle
    if op == "add":
        f2, o2 = random_tree(rng, depth - 1)
        oracle = None if o1 is None or o2 is None else o1 + o2
        return (lambda p: tw.add(f1(p), f2(p), p)), oracle
    if op == "exp":
        oracle = None
        if o1 is not None and abs(o1) < 500:
            oracle = mpmath.exp(o1)
        return (lambda p: tw.exp(f1(p), p)), oracle
    if op == "recip":
        oracle = None if o1 is None else 1 / o1
        return (lambda p: f1(p).reciprocal()), oracle
    if op == "pow":
        e = rng.randint(2, 5)
        oracle = None
        if o1 is not None and abs(mpmath.log(o1 + mpmath.mpf("1e-600"))) * e < 1000:
            oracle = o1**e
        return (lambda p, e=e: tw.pow_tower(f1(p), e, p)), oracle
    oracle = None if o1 is None else mpmath.sqrt(o1)
    return (lambda p: tw.sqrt(f1(p), p)), oracle
