"""Iterated-exponential interval reals with certified three-valued comparison.

A :class:`TowerReal` encodes a positive real as ``exp`` applied ``height``
times to a dyadic interval mantissa ``[lo, hi]``; values in (0, 1) carry a
reciprocal flag instead of a sign.  All arithmetic produces sound
enclosures: the represented real always lies inside the expanded interval,
with endpoint rounding directed outward.  Comparisons decide only when the
enclosures are disjoint, so a decided answer is a certificate.

Canonical form: height-0 values lie in (0, 2^64); mantissas at height >= 1
lie in [1, 2^64), values below that range being re-expressed one level
down.  Numbers whose binary exponent exceeds the underlying MPFR range
(about 2^30 here) are never flattened; they are manipulated through their
logarithms instead.  When one operand of a multiplication or addition is
so much smaller that it cannot move the dominant operand's top-level
mantissa by one unit in the last place, the small operand is absorbed and
the enclosure widened by one ulp; the absorption test is itself a
certified comparison, never a height heuristic.

Subtraction of nearly equal towers is refused by design
(:class:`PrecisionLossError`): certifying callers treat it as Undecided.
"""

from __future__ import annotations

import functools
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

import gmpy2

from .errors import DomainError, NonPositiveInput, PrecisionLossError

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096

_GUARD = 8

# Largest argument for which a numeric mpfr exp() is attempted.  The MPFR
# build caps binary exponents near 2^30, i.e. exp overflows a little above
# 7.4e8; staying at 6e8 leaves room for products of numeric results.
_EXP_ARG_LIMIT = 6 * 10**8

_ZERO = gmpy2.mpfr(0)
_H0_MAX = gmpy2.mpfr(2) ** 64

_FACTORIAL_EXACT_LIMIT = 10**6


class Comparison(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNDECIDED = "undecided"

    def reversed(self) -> "Comparison":
        if self is Comparison.LESS:
            return Comparison.GREATER
        if self is Comparison.GREATER:
            return Comparison.LESS
        return self


@functools.lru_cache(maxsize=None)
def _ctx_down(prec: int):
    return gmpy2.context(
        precision=prec + _GUARD,
        round=gmpy2.RoundDown,
        trap_overflow=True,
        trap_underflow=True,
        trap_divzero=True,
        trap_invalid=True,
    )


@functools.lru_cache(maxsize=None)
def _ctx_up(prec: int):
    return gmpy2.context(
        precision=prec + _GUARD,
        round=gmpy2.RoundUp,
        trap_overflow=True,
        trap_underflow=True,
        trap_divzero=True,
        trap_invalid=True,
    )


def _to_number(x):
    """Convert an int/Fraction to a gmpy2 scalar usable as an mpfr operand."""
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return gmpy2.mpz(x)
    return x


@functools.lru_cache(maxsize=None)
def _neg_ctx(prec: int):
    return gmpy2.context(precision=prec)


def _neg(x):
    # bare `-x` on an mpfr rounds to the *thread* context (53 bits by
    # default), silently destroying precision; negate at the operand's own
    # precision instead, which is always exact
    return _neg_ctx(x.precision).minus(x)


def _abs(x):
    return _neg(x) if x < 0 else x


def _cvt(x, ctx):
    # addition with an exact zero rounds x according to ctx
    return ctx.add(_ZERO, _to_number(x))


# ---------------------------------------------------------------------------
# raw interval helpers: signed mpfr intervals (lo, hi), lo <= hi
# ---------------------------------------------------------------------------


def _iadd(a, b, prec):
    return _ctx_down(prec).add(a[0], b[0]), _ctx_up(prec).add(a[1], b[1])


def _isub(a, b, prec):
    return _ctx_down(prec).sub(a[0], b[1]), _ctx_up(prec).sub(a[1], b[0])


def _imul(a, b, prec):
    dn, up = _ctx_down(prec), _ctx_up(prec)
    los = [dn.mul(a[0], b[0]), dn.mul(a[0], b[1]), dn.mul(a[1], b[0]), dn.mul(a[1], b[1])]
    his = [up.mul(a[0], b[0]), up.mul(a[0], b[1]), up.mul(a[1], b[0]), up.mul(a[1], b[1])]
    return min(los), max(his)


def _idiv_pos(a, b, prec):
    # b strictly positive interval
    return _ctx_down(prec).div(a[0], b[1]), _ctx_up(prec).div(a[1], b[0])


def _iexp(a, prec):
    try:
        return _ctx_down(prec).exp(a[0]), _ctx_up(prec).exp(a[1])
    except (gmpy2.OverflowResultError, gmpy2.UnderflowResultError) as exc:
        raise PrecisionLossError(f"exp out of numeric range: {exc}") from exc


def _iln(a, prec):
    return _ctx_down(prec).log(a[0]), _ctx_up(prec).log(a[1])


def _ilog1p(a, prec):
    return _ctx_down(prec).log1p(a[0]), _ctx_up(prec).log1p(a[1])


def _irecip_pos(a, prec):
    one = gmpy2.mpfr(1)
    return _ctx_down(prec).div(one, a[1]), _ctx_up(prec).div(one, a[0])


# ---------------------------------------------------------------------------
# the tower type
# ---------------------------------------------------------------------------


class TowerReal:
    """Positive real enclosed by ``exp^height([lo, hi])`` or its reciprocal."""

    __slots__ = ("height", "lo", "hi", "recip")

    def __init__(self, height: int, lo, hi, recip: bool = False):
        self.height = height
        self.lo = lo
        self.hi = hi
        self.recip = recip

    def __repr__(self):
        return format_tower(self, digits=8)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def reciprocal(self) -> "TowerReal":
        if self.height == 0 and not self.recip:
            prec = max(self.lo.precision, DEFAULT_PRECISION)
            lo, hi = _irecip_pos((self.lo, self.hi), prec)
            return _make(0, lo, hi, False, prec)
        return _make(self.height, self.lo, self.hi, not self.recip,
                     max(self.lo.precision, DEFAULT_PRECISION))


def _make(height: int, lo, hi, recip: bool, prec: int) -> TowerReal:
    """Normalize an enclosure into canonical form (soundness-preserving)."""
    if gmpy2.is_nan(lo) or gmpy2.is_nan(hi) or not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)):
        raise PrecisionLossError("non-finite interval endpoint")
    if lo > hi:
        raise PrecisionLossError("inverted interval")
    if height == 0 and lo <= 0:
        raise NonPositiveInput("tower reals are positive")
    # reciprocal of a height-0 value is computed numerically
    if recip and height == 0:
        lo, hi = _irecip_pos((lo, hi), prec)
        recip = False
    ln_h0_max = _ctx_down(prec).mul(gmpy2.mpfr(64), _ctx_down(prec).const_log2())
    while True:
        if height >= 1 and hi < ln_h0_max:
            # entire level fits one storey down
            lo, hi = _iexp((lo, hi), prec)
            height -= 1
            continue
        if hi >= _H0_MAX and lo > 0:
            lo, hi = _iln((lo, hi), prec)
            height += 1
            continue
        break
    if height == 0 and lo <= 0:
        raise NonPositiveInput("tower reals are positive")
    # a reciprocal whose core dipped fully below 1 flips back to a plain value
    if recip and height == 0 and hi < 1:
        lo, hi = _irecip_pos((lo, hi), prec)
        recip = False
    if recip and height == 0 and lo == hi == 1:
        recip = False
    return TowerReal(height, lo, hi, recip)


def _point(x, prec: int) -> TowerReal:
    lo = _cvt(x, _ctx_down(prec))
    hi = _cvt(x, _ctx_up(prec))
    return _make(0, lo, hi, False, prec)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_integer(n: int, prec: int = DEFAULT_PRECISION) -> TowerReal:
    if n <= 0:
        raise NonPositiveInput(f"expected a positive integer, got {n}")
    return _point(n, prec)


def from_rational(q, prec: int = DEFAULT_PRECISION) -> TowerReal:
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveInput(f"expected a positive rational, got {q}")
    return _point(q, prec)


def from_factorial(k: int, prec: int = DEFAULT_PRECISION) -> TowerReal:
    """Sound enclosure of k!.

    Exact product for k <= 10^6; above that, the two-sided Stirling
    bounds ``sqrt(2 pi k)(k/e)^k e^{1/(12k+1)} < k! < ... e^{1/(12k)}``
    evaluated with directed rounding.
    """
    if k <= 0:
        raise NonPositiveInput(f"expected a positive integer, got {k}")
    if k <= _FACTORIAL_EXACT_LIMIT:
        return _point(int(gmpy2.fac(k)), prec)
    dn, up = _ctx_down(prec), _ctx_up(prec)
    kd, ku = _cvt(k, dn), _cvt(k, up)
    # ln k! = k(ln k - 1) + ln(2 pi k)/2 + r,  r in (1/(12k+1), 1/(12k))
    ln_lo = dn.add(
        dn.add(
            dn.mul(kd, dn.sub(dn.log(kd), gmpy2.mpfr(1))),
            dn.div(dn.log(dn.mul(dn.mul(gmpy2.mpfr(2), dn.const_pi()), kd)), gmpy2.mpfr(2)),
        ),
        dn.div(gmpy2.mpfr(1), _cvt(12 * k + 1, up)),
    )
    ln_hi = up.add(
        up.add(
            up.mul(ku, up.sub(up.log(ku), gmpy2.mpfr(1))),
            up.div(up.log(up.mul(up.mul(gmpy2.mpfr(2), up.const_pi()), ku)), gmpy2.mpfr(2)),
        ),
        up.div(gmpy2.mpfr(1), _cvt(12 * k, dn)),
    )
    return _exp_interval((ln_lo, ln_hi), prec)


def _exp_interval(arg, prec: int) -> TowerReal:
    """Tower enclosing exp(arg) for a signed numeric interval arg."""
    lo, hi = arg
    if -_EXP_ARG_LIMIT <= lo and hi <= _EXP_ARG_LIMIT:
        elo, ehi = _iexp((lo, hi), prec)
        return _make(0, elo, ehi, False, prec)
    if lo >= 0:
        return _make(1, lo, hi, False, prec)
    if hi <= 0:
        return _make(1, _neg(hi), _neg(lo), True, prec)
    raise PrecisionLossError("exp of a sign-straddling huge interval")


# ---------------------------------------------------------------------------
# logarithm values: ("n", lo, hi) signed numeric, or ("t", sign, TowerReal)
# ---------------------------------------------------------------------------


def _flatten(t: TowerReal, prec: int):
    """Numeric interval for t, or None when beyond the mpfr exponent range."""
    if t.recip:
        core = _flatten(TowerReal(t.height, t.lo, t.hi, False), prec)
        if core is None:
            return None
        return _irecip_pos(core, prec)
    if t.height == 0:
        return (t.lo, t.hi)
    if t.height == 1 and t.hi <= _EXP_ARG_LIMIT:
        return _iexp((t.lo, t.hi), prec)
    return None


def _log_of(t: TowerReal, prec: int):
    """LogVal of ln(t); sound, signed."""
    if t.recip:
        val = _log_of(TowerReal(t.height, t.lo, t.hi, False), prec)
        return _log_negate(val)
    if t.height == 0:
        return ("n",) + _iln((t.lo, t.hi), prec)
    if t.height == 1:
        return ("n", t.lo, t.hi)
    inner = TowerReal(t.height - 1, t.lo, t.hi, False)
    flat = _flatten(inner, prec)
    if flat is not None:
        return ("n",) + flat
    return ("t", 1, inner)


def _log_negate(val):
    if val[0] == "n":
        return ("n", _neg(val[2]), _neg(val[1]))
    return ("t", -val[1], val[2])


def _exp_of_log(val, prec: int) -> TowerReal:
    if val[0] == "n":
        return _exp_interval((val[1], val[2]), prec)
    _, sign, tower = val
    if tower.recip:
        # exp of a tiny magnitude: enclose numerically via the flattened value
        flat = _flatten(tower, prec)
        if flat is not None:
            if sign < 0:
                flat = (_neg(flat[1]), _neg(flat[0]))
            return _exp_interval(flat, prec)
        # magnitude v certified below 2^-(prec+4): e^(+-v) lies within
        # 1 +- 2^-(prec+3) (since e^v <= 1 + 2v for v <= 1/2)
        if _certifiably_negligible(tower, prec):
            one = gmpy2.mpfr(1)
            margin = Fraction(1, 2 ** (prec + 3))
            if sign > 0:
                return _make(0, one, _cvt(1 + margin, _ctx_up(prec)), False, prec)
            return _make(0, _cvt(1 - margin, _ctx_down(prec)), one, False, prec)
        raise PrecisionLossError("exp of an unresolvable tiny magnitude")
    grown = _make(tower.height + 1, tower.lo, tower.hi, False, prec)
    if sign < 0:
        return grown.reciprocal()
    return grown


def _certifiably_negligible(t: TowerReal, prec: int) -> bool:
    """Certify t <= 2^-(prec+4); t is a reciprocal tower here."""
    if not t.recip:
        return False
    core = TowerReal(t.height, t.lo, t.hi, False)
    threshold = pow_int(from_integer(2, prec), prec + 4, prec)
    return compare(core, threshold) is Comparison.GREATER


def _absorb_widen(t: TowerReal, prec: int, upward: bool) -> TowerReal:
    """Widen one enclosure side to absorb a factor (1 +- r), r <= 2^-(prec+4).

    At height 0 the perturbation is multiplicative on the value; at height
    >= 1 it moves the top-level mantissa by at most r additively (the
    level-one shift is ln(1 +- r) and higher levels only shrink it).
    """
    assert not t.recip
    dn, up = _ctx_down(prec), _ctx_up(prec)
    margin = _cvt(Fraction(1, 2 ** (prec + 4)), up)
    if t.height == 0:
        if upward:
            return TowerReal(0, t.lo, up.mul(t.hi, up.add(gmpy2.mpfr(1), margin)), t.recip)
        return TowerReal(0, dn.mul(t.lo, dn.sub(gmpy2.mpfr(1), margin)), t.hi, t.recip)
    if upward:
        return TowerReal(t.height, t.lo, up.add(t.hi, margin), t.recip)
    return TowerReal(t.height, dn.sub(t.lo, margin), t.hi, t.recip)


# ---------------------------------------------------------------------------
# positive-tower addition/subtraction core
# ---------------------------------------------------------------------------


def _add_pos(a: TowerReal, b: TowerReal, prec: int, subtract: bool = False) -> TowerReal:
    """Enclosure of a + b, or a - b (requiring a > b), for plain towers."""
    fa, fb = _flatten(a, prec), _flatten(b, prec)
    if fa is not None and fb is not None:
        iv = _isub(fa, fb, prec) if subtract else _iadd(fa, fb, prec)
        if subtract and iv[0] <= 0:
            raise PrecisionLossError("difference cannot be certified positive")
        return _make(0, iv[0], iv[1], False, prec)
    cmp = compare(a, b)
    if subtract:
        if cmp is not Comparison.GREATER:
            raise PrecisionLossError("subtraction of nearly equal towers")
    else:
        if cmp is Comparison.LESS:
            a, b = b, a
        elif cmp is Comparison.UNDECIDED:
            # sound coarse enclosure: max(a,b) <= a+b <= 2*max(a,b); since
            # the max is unknown, take endpoint extrema over both doublings
            two = from_integer(2, prec)
            ua, ub = mul(a, two, prec), mul(b, two, prec)
            height = max(ua.height, ub.height)
            ua_m, ub_m = _match_height(ua, height, prec), _match_height(ub, height, prec)
            if ua_m is None or ub_m is None or ua.recip or ub.recip:
                raise PrecisionLossError("cannot enclose a sum of incomparable towers")
            hi = max(ua_m.hi, ub_m.hi)
            lo = _lower_mantissa_of(a, b, TowerReal(height, hi, hi, False), prec)
            return TowerReal(height, lo, hi, False)
    ratio = div(b, a, prec)
    if _certifiably_negligible(ratio, prec):
        return _absorb_widen(a, prec, upward=not subtract)
    flat_ratio = _flatten(ratio, prec)
    if flat_ratio is None:
        raise PrecisionLossError("operand ratio is not representable")
    if subtract:
        if flat_ratio[1] >= 1:
            raise PrecisionLossError("subtraction of nearly equal towers")
        corr = _ilog1p((_neg(flat_ratio[1]), _neg(flat_ratio[0])), prec)
    else:
        corr = _ilog1p(flat_ratio, prec)
    return _exp_of_log(_log_add(_log_of(a, prec), ("n",) + corr, prec), prec)


def _lower_mantissa_of(a: TowerReal, b: TowerReal, upper: TowerReal, prec: int):
    # lower endpoint for a+b: an operand lower bound re-expressed at the
    # height of `upper` (a+b >= max(a, b) >= either operand's lower bound)
    best = None
    for cand in (a, b):
        la = TowerReal(cand.height, cand.lo, cand.lo, False)
        lifted = _match_height(la, upper.height, prec)
        if lifted is not None and (best is None or lifted.lo > best):
            best = lifted.lo
    if best is None:
        raise PrecisionLossError("cannot express a lower bound for the sum")
    return best


def _match_height(t: TowerReal, height: int, prec: int) -> Optional[TowerReal]:
    cur = t
    while cur.height < height:
        if cur.lo <= 0:
            return None
        lo, hi = _iln((cur.lo, cur.hi), prec)
        cur = TowerReal(cur.height + 1, lo, hi, cur.recip)
    return cur if cur.height == height else None


def _log_add(v1, v2, prec: int):
    """Sound signed addition of two LogVals."""
    if v1[0] == "n" and v2[0] == "n":
        return ("n",) + _iadd((v1[1], v1[2]), (v2[1], v2[2]), prec)
    if v1[0] == "n":
        v1, v2 = v2, v1
    # v1 is a tower log
    _, s1, t1 = v1
    if v2[0] == "n":
        nlo, nhi = v2[1], v2[2]
        if nlo == 0 and nhi == 0:
            return v1
        if nlo > 0 or nhi < 0:
            mag = _make(0, min(_abs(nlo), _abs(nhi)), max(_abs(nlo), _abs(nhi)), False, prec)
            if (s1 > 0) == (nlo > 0):
                return ("t", s1, _add_pos(t1, mag, prec))
            # an unflattenable tower dominates any numeric addend
            return ("t", s1, _add_pos(t1, mag, prec, subtract=True))
        # numeric interval straddles zero: treat as a symmetric perturbation
        bound = max(_abs(nlo), _abs(nhi))
        mag = _make(0, bound, bound, False, prec)
        upper = _add_pos(t1, mag, prec)
        lower = _add_pos(t1, mag, prec, subtract=True)
        matched = _match_height(lower, upper.height, prec)
        lo_end = matched.lo if matched is not None else upper.lo
        return ("t", s1, TowerReal(upper.height, lo_end, upper.hi, upper.recip))
    _, s2, t2 = v2
    if s1 == s2:
        return ("t", s1, _add_pos(t1, t2, prec))
    cmp = compare(t1, t2)
    if cmp is Comparison.GREATER:
        return ("t", s1, _add_pos(t1, t2, prec, subtract=True))
    if cmp is Comparison.LESS:
        return ("t", s2, _add_pos(t2, t1, prec, subtract=True))
    raise PrecisionLossError("subtraction of nearly equal towers")


# ---------------------------------------------------------------------------
# public arithmetic
# ---------------------------------------------------------------------------


def mul(a: TowerReal, b: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    if b.height == 0 and not b.recip and b.lo == b.hi == 1:
        return a
    if a.height == 0 and not a.recip and a.lo == a.hi == 1:
        return b
    if a.recip and b.recip:
        return _mul_pos(a.reciprocal(), b.reciprocal(), prec).reciprocal()
    if b.recip:
        return div(a, b.reciprocal(), prec)
    if a.recip:
        return div(b, a.reciprocal(), prec)
    return _mul_pos(a, b, prec)


def _mul_pos(a: TowerReal, b: TowerReal, prec: int) -> TowerReal:
    fa, fb = _flatten(a, prec), _flatten(b, prec)
    if fa is not None and fb is not None and a.height == 0 and b.height == 0:
        lo, hi = _imul(fa, fb, prec)
        return _make(0, lo, hi, False, prec)
    return _exp_of_log(_log_add(_log_of(a, prec), _log_of(b, prec), prec), prec)


def div(a: TowerReal, b: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    if b.height == 0 and not b.recip and b.lo == b.hi == 1:
        return a
    if a.recip or b.recip:
        return mul(a, b.reciprocal(), prec)
    fa, fb = _flatten(a, prec), _flatten(b, prec)
    if fa is not None and fb is not None and a.height == 0 and b.height == 0:
        lo, hi = _idiv_pos(fa, fb, prec)
        return _make(0, lo, hi, False, prec)
    return _exp_of_log(_log_add(_log_of(a, prec), _log_negate(_log_of(b, prec)), prec), prec)


def add(a: TowerReal, b: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    if a.recip and b.recip:
        # 1/x + 1/y = (x+y)/(xy)
        x, y = a.reciprocal(), b.reciprocal()
        return div(_add_pos(x, y, prec), _mul_pos(x, y, prec), prec)
    if a.recip or b.recip:
        small, big = (a, b) if a.recip else (b, a)
        fs = _flatten(small, prec)
        fb = _flatten(big, prec)
        if fs is not None and fb is not None:
            lo, hi = _iadd(fs, fb, prec)
            return _make(0, lo, hi, False, prec)
        ratio = div(small, big, prec)
        if _certifiably_negligible(ratio, prec):
            return _absorb_widen(big, prec, upward=True)
        raise PrecisionLossError("cannot absorb reciprocal addend")
    return _add_pos(a, b, prec)


def sub(a: TowerReal, b: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    """Enclosure of a - b; requires the difference be certifiably positive."""
    if a.recip or b.recip:
        fa, fb = _flatten(a, prec), _flatten(b, prec)
        if fa is not None and fb is not None:
            lo, hi = _isub(fa, fb, prec)
            if lo <= 0:
                raise PrecisionLossError("difference cannot be certified positive")
            return _make(0, lo, hi, False, prec)
        if b.recip and not a.recip:
            ratio = div(b, a, prec)
            if _certifiably_negligible(ratio, prec):
                return _absorb_widen(a, prec, upward=False)
        raise PrecisionLossError("subtraction of nearly equal towers")
    return _add_pos(a, b, prec, subtract=True)


def exp(a: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    if a.recip:
        flat = _flatten(a, prec)
        if flat is not None:
            return _exp_interval(flat, prec)
        if _certifiably_negligible(a, prec):
            # a <= 2^-(prec+4), so e^a <= 1 + 2^-(prec+3)
            return _make(0, gmpy2.mpfr(1),
                         _cvt(1 + Fraction(1, 2 ** (prec + 3)), _ctx_up(prec)), False, prec)
        raise PrecisionLossError("exp of unresolvable reciprocal")
    if a.height == 0:
        return _exp_interval((a.lo, a.hi), prec)
    return _make(a.height + 1, a.lo, a.hi, False, prec)


def ln(a: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    """Logarithm.

    For a reciprocal-form value 1/x this returns ln(x), the magnitude of
    the true (negative) logarithm, since the type has no negative values.
    """
    if a.recip:
        return ln(a.reciprocal(), prec)
    if a.height >= 1:
        return _make(a.height - 1, a.lo, a.hi, False, prec)
    if a.lo <= 1:
        raise DomainError("ln requires a value certifiably greater than 1")
    lo, hi = _iln((a.lo, a.hi), prec)
    return _make(0, lo, hi, False, prec)


def pow_int(a: TowerReal, e: int, prec: int = DEFAULT_PRECISION) -> TowerReal:
    return pow_tower(a, e, prec)


def pow_tower(a: TowerReal, e, prec: int = DEFAULT_PRECISION) -> TowerReal:
    """a ** e for e an int, Fraction, or TowerReal (e may be negative if scalar)."""
    if isinstance(e, int) and e == 0:
        return from_integer(1, prec)
    negative = False
    if isinstance(e, (int, Fraction)) and e < 0:
        negative = True
        e = -e
    if a.recip:
        out = pow_tower(a.reciprocal(), e, prec).reciprocal()
        return out.reciprocal() if negative else out
    if a.height == 0 and a.lo == a.hi == 1:
        return a
    log_a = _log_of(a, prec)
    scaled = _log_scale(log_a, e, prec)
    out = _exp_of_log(scaled, prec)
    return out.reciprocal() if negative else out


def _log_scale(val, factor, prec: int):
    """Multiply a LogVal by a positive factor (scalar or TowerReal)."""
    if isinstance(factor, TowerReal):
        f = factor
    else:
        f = _point(factor, prec)
    if val[0] == "n":
        flat_f = _flatten(f, prec)
        if flat_f is not None:
            try:
                return ("n",) + _imul((val[1], val[2]), flat_f, prec)
            except (gmpy2.OverflowResultError, gmpy2.UnderflowResultError):
                pass
        if val[1] > 0:
            mag = _make(0, val[1], val[2], False, prec)
        elif val[2] < 0:
            mag = _make(0, _neg(val[2]), _neg(val[1]), False, prec)
        else:
            raise PrecisionLossError("scaling a sign-straddling logarithm by a huge factor")
        sign = 1 if val[1] > 0 else -1
        return ("t", sign, _mul_pos(mag, f, prec))
    _, sign, tower = val
    return ("t", sign, mul(tower, f, prec))


def sqrt(a: TowerReal, prec: int = DEFAULT_PRECISION) -> TowerReal:
    return pow_tower(a, Fraction(1, 2), prec)


def pi(prec: int = DEFAULT_PRECISION) -> TowerReal:
    return _make(0, _ctx_down(prec).const_pi(), _ctx_up(prec).const_pi(), False, prec)


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


def compare(a: TowerReal, b: TowerReal) -> Comparison:
    """Three-valued certified comparison; Undecided when enclosures overlap."""
    if a is b:
        return Comparison.EQUAL
    if (a.recip, a.height, a.lo, a.hi) == (b.recip, b.height, b.lo, b.hi) and a.is_exact:
        return Comparison.EQUAL
    if a.recip and b.recip:
        return compare(a.reciprocal(), b.reciprocal()).reversed()
    if a.recip != b.recip:
        # compare 1/x vs y through x*y vs 1
        prec = max(a.lo.precision, b.lo.precision, DEFAULT_PRECISION)
        recip_one, plain = (a, b) if a.recip else (b, a)
        prod = _mul_pos(recip_one.reciprocal(), plain, prec)
        one = from_integer(1)
        res = compare(prod, one)
        if res is Comparison.UNDECIDED:
            return res
        # 1/x < y  iff  1 < x*y
        out = Comparison.LESS if res is Comparison.GREATER else (
            Comparison.GREATER if res is Comparison.LESS else Comparison.UNDECIDED)
        return out if a.recip else out.reversed()
    prec = max(a.lo.precision, b.lo.precision, DEFAULT_PRECISION)
    ta, tb = a, b
    while ta.height != tb.height:
        low, high = (ta, tb) if ta.height < tb.height else (tb, ta)
        if low.hi <= 0:
            # low's remaining iterated log is nonpositive while high's is
            # exp(...) > 0, so low is strictly smaller
            return Comparison.LESS if low is ta else Comparison.GREATER
        if low.lo <= 0:
            # interval straddles the log fixed point: decide via the upper
            # endpoint, which can keep lifting (a point never straddles)
            point = TowerReal(low.height, low.hi, low.hi, False)
            sub = compare(point, high)
            if sub is Comparison.LESS:
                return Comparison.LESS if low is ta else Comparison.GREATER
            return Comparison.UNDECIDED
        lo, hi = _iln((low.lo, low.hi), prec)
        lifted = TowerReal(low.height + 1, lo, hi, False)
        if low is ta:
            ta = lifted
        else:
            tb = lifted
    if ta.hi < tb.lo:
        return Comparison.LESS
    if ta.lo > tb.hi:
        return Comparison.GREATER
    return Comparison.UNDECIDED


def compare_refining(make_a: Callable[[int], TowerReal],
                     make_b: Callable[[int], TowerReal],
                     start_prec: int = DEFAULT_PRECISION,
                     max_prec: int = MAX_PRECISION) -> Comparison:
    """Compare quantities given as precision-parameterized evaluators.

    Re-evaluates both sides with doubled mantissa precision until the
    comparison decides or ``max_prec`` is reached.
    """
    prec = start_prec
    while True:
        try:
            res = compare(make_a(prec), make_b(prec))
        except PrecisionLossError:
            res = Comparison.UNDECIDED
        if res is not Comparison.UNDECIDED or prec >= max_prec:
            return res
        prec = min(2 * prec, max_prec)


# ---------------------------------------------------------------------------
# text notation
# ---------------------------------------------------------------------------


def _fmt_mpfr(x, digits: int) -> str:
    if x == int(x) and -10**18 < x < 10**18:
        return str(int(x))
    mant, exp10, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    mant = mant.rstrip("0") or "0"
    head, tail = mant[0], mant[1:]
    body = f"{head}.{tail}" if tail else head
    return f"{sign}{body}e{exp10 - 1}"


def format_tower(t: TowerReal, digits: int = 30) -> str:
    body = f"E^{t.height}[{_fmt_mpfr(t.lo, digits)},{_fmt_mpfr(t.hi, digits)}]"
    return ("1/" + body) if t.recip else body


def parse_tower(text: str, prec: int = DEFAULT_PRECISION) -> TowerReal:
    """Parse the ``E^h[lo,hi]`` notation, widening one decimal ulp outward."""
    s = text.strip()
    recip = False
    if s.startswith("1/"):
        recip = True
        s = s[2:]
    if not s.startswith("E^"):
        raise DomainError(f"not tower notation: {text!r}")
    bracket = s.index("[")
    height = int(s[2:bracket])
    inner = s[bracket + 1:s.rindex("]")]
    lo_s, hi_s = inner.split(",")
    lo_q, lo_ulp = _parse_decimal(lo_s)
    hi_q, hi_ulp = _parse_decimal(hi_s)
    # displayed digits are rounded to nearest: widen one decimal ulp outward
    lo = gmpy2.next_below(_cvt(lo_q - lo_ulp, _ctx_down(prec)))
    hi = gmpy2.next_above(_cvt(hi_q + hi_ulp, _ctx_up(prec)))
    return _make(height, lo, hi, recip, prec)


def _parse_decimal(s: str):
    """(value, last-digit weight) of a decimal literal."""
    s = s.strip()
    mant, _, ex = s.partition("e") if "e" in s else s.partition("E")
    shift = int(ex) if ex else 0
    if "." in mant:
        head, frac = mant.split(".")
        value = Fraction(int(head + frac), 10 ** len(frac))
        ulp = Fraction(1, 10 ** len(frac))
    else:
        value = Fraction(int(mant))
        ulp = Fraction(1)
    return value * Fraction(10) ** shift, ulp * Fraction(10) ** shift


def log10_interval(a: TowerReal, prec: int = DEFAULT_PRECISION):
    """(lo, hi) numeric interval for log10|a| when it fits the mpfr range.

    For reciprocal values the magnitude of log10 is returned.  None when
    the logarithm itself is beyond numeric range.
    """
    val = _log_of(a, prec)
    if val[0] != "n":
        return None
    dn, up = _ctx_down(prec), _ctx_up(prec)
    ln10 = (dn.log(gmpy2.mpfr(10)), up.log(gmpy2.mpfr(10)))
    lo, hi = val[1], val[2]
    if lo < 0 and hi <= 0:
        lo, hi = _neg(hi), _neg(lo)
    return (dn.div(lo, ln10[1]), up.div(hi, ln10[0]))
