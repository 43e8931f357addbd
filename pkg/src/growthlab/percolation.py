"""Certified evaluation of the percolation-gap constant chain.

Every named constant in the derivation of the universal gap at 1 for the
critical probability of Bernoulli site percolation on Cayley graphs is
computed as a tower-interval enclosure, and every checkable inequality is
emitted as a :class:`StepReport` with status CertifiedTrue, CertifiedFalse,
or Undecided.  The tool never assumes an inequality: a decided status is
backed by disjoint interval enclosures.

The one genuine ambiguity is which branch of the effective minimal-growth
constant enters the heat-kernel constant gamma_k: the two readings give
final sum bounds that differ by an exponential level.  Steps that depend
on the reading are emitted per branch with role "probe"; the headline
claim is Undecided unless both branches agree.  Probe outcomes never feed
the aggregate exit status, so a refuted reading is reported but not
treated as a refutation of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import gmpy2

from . import bounds, tower
from .errors import PrecisionLossError
from .tower import Comparison, TowerReal

FACTORIAL_16 = int(gmpy2.fac(16))

BRANCHES = ("subgroup", "radius")


@dataclass(frozen=True)
class GapParams:
    """Parameter choices of the gap derivation (defaults as published)."""

    C: int = 100
    r: int = 3
    index_n: int = FACTORIAL_16
    C0: int = 4000

    @property
    def k(self) -> int:
        return 2 * self.r + 2

    def __post_init__(self):
        if self.C < 2 or self.r < 1 or self.index_n < 1:
            raise ValueError("parameters must be positive (C at least 2)")
        # C0 >= 16/a with a > 1/250 admits C0 = 4000
        if self.C0 < 4000:
            raise ValueError("C0 must be at least 4000")


class StepStatus(Enum):
    CERTIFIED_TRUE = "CertifiedTrue"
    CERTIFIED_FALSE = "CertifiedFalse"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class StepReport:
    name: str
    statement: str
    relation: str
    left: Optional[TowerReal]
    right: Optional[TowerReal]
    status: StepStatus
    role: str = "claim"  # probes explore a reading without judging the chain


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def rough_embedding_constant(n: int, prec: int = tower.DEFAULT_PRECISION) -> TowerReal:
    """U = 2 (8n-3)^(3n-2), the rough-embedding multiplicity bound at index n."""
    if n < 1:
        raise ValueError("index must be positive")
    return tower.mul(
        tower.from_integer(2, prec),
        tower.pow_tower(tower.from_integer(8 * n - 3, prec), 3 * n - 2, prec),
        prec,
    )


def one_minus_exp_neg(q: TowerReal, prec: int = tower.DEFAULT_PRECISION) -> TowerReal:
    """Enclosure of 1 - exp(-q) for q > 0.

    Numeric when q is representable; for tiny reciprocal-tower q it uses
    q (1 - q) <= 1 - exp(-q) <= q.
    """
    flat = tower._flatten(q, prec)
    if flat is not None and flat[1] <= tower._EXP_ARG_LIMIT:
        dn, up = tower._ctx_down(prec), tower._ctx_up(prec)
        # f(q) = -expm1(-q) is increasing; negations are exact
        lo = tower._neg(up.expm1(tower._neg(flat[0])))
        hi = tower._neg(dn.expm1(tower._neg(flat[1])))
        lo, hi = min(lo, hi), max(lo, hi)
        return tower._make(0, lo, hi, False, prec)
    one = tower.from_integer(1, prec)
    factor = tower.sub(one, q, prec)
    return tower.mul(q, factor, prec)


@dataclass(frozen=True)
class AdjustedSiteParameter:
    """1 - (1 - p^(1/U))^((8n-4)U), kept with its exactly-represented complement."""

    value: TowerReal
    complement: Optional[TowerReal]  # None means exactly zero (p = 1)


def adjusted_site_parameter(p: Fraction, n: int,
                            prec: int = tower.DEFAULT_PRECISION) -> AdjustedSiteParameter:
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("percolation parameter must lie in (0, 1]")
    if p == 1:
        return AdjustedSiteParameter(tower.from_integer(1, prec), None)
    U = rough_embedding_constant(n, prec)
    # q = -ln(p)/U, so 1 - p^(1/U) = 1 - exp(-q)
    ln_inv_p = tower.ln(tower.from_rational(1 / p, prec), prec)
    q = tower.div(ln_inv_p, U, prec)
    base = one_minus_exp_neg(q, prec)
    exponent = tower.mul(tower.from_integer(8 * n - 4, prec), U, prec)
    complement = tower.pow_tower(base, exponent, prec)
    value = tower.sub(tower.from_integer(1, prec), complement, prec)
    return AdjustedSiteParameter(value, complement)


def survival_floor(n: int, p: Fraction = Fraction(1, 2),
                   prec: int = tower.DEFAULT_PRECISION) -> TowerReal:
    """Lower bound ((2U)^-1 log(1/p))^((8n-4)U) for the site parameter margin.

    With p = 1/2 this is the floor used for the index-16! reduction; the
    p = 2/3 variant (log 3/2) appears in the cluster-probability argument.
    """
    U = rough_embedding_constant(n, prec)
    log_term = tower.ln(tower.from_rational(1 / Fraction(p), prec), prec)
    base = tower.div(log_term, tower.mul(tower.from_integer(2, prec), U, prec), prec)
    exponent = tower.mul(tower.from_integer(8 * n - 4, prec), U, prec)
    return tower.pow_tower(base, exponent, prec)


def _epsilon_branch(k: int, branch: str, C: int, prec: int) -> TowerReal:
    eps = bounds.min_growth_constant(k, C, prec)
    if branch == "subgroup":
        return eps.subgroup_branch
    if branch == "radius":
        return eps.radius_branch
    if branch == "min":
        if eps.value is None:
            raise PrecisionLossError("effective-constant branches cannot be separated")
        return eps.value
    raise ValueError(f"unknown branch {branch!r}")


def return_bound_constant(k: int, branch: str = "min", C: int = 100,
                          prec: int = tower.DEFAULT_PRECISION) -> TowerReal:
    """gamma_k = 8 k^((k+5)/2) e^(-k/2) / eps_k, with eps_k taken per branch."""
    if k < 1:
        raise ValueError("dimension parameter must be positive")
    eps = _epsilon_branch(k, branch, C, prec)
    num = tower.mul(
        tower.from_integer(8, prec),
        tower.pow_tower(tower.from_integer(k, prec), Fraction(k + 5, 2), prec),
        prec,
    )
    den = tower.mul(
        tower.pow_tower(tower.exp(tower.from_integer(1, prec), prec), Fraction(k, 2), prec),
        eps,
        prec,
    )
    return tower.div(num, den, prec)


def green_diagonal_constant(n: int) -> Fraction:
    """c_n = (4n)^(-n), the heat-kernel diagonal constant."""
    return Fraction(1, (4 * n) ** n)


def green_diagonal_exact(n: int) -> Fraction:
    """t_n = 1/(4^n n!), the exact quantity c_n underestimates for n >= 2."""
    return Fraction(1, 4**n * int(gmpy2.fac(n)))


def named_constants(params: GapParams, branch: str = "radius",
                    prec: int = tower.DEFAULT_PRECISION) -> Dict[str, object]:
    """All named quantities of the chain, by construction order."""
    r = params.r
    m = r * r + 2
    e_t = tower.exp(tower.from_integer(1, prec), prec)
    gamma_low = return_bound_constant(2 * r, branch, params.C, prec)
    gamma_high = return_bound_constant(params.k, branch, params.C, prec)
    D0 = Fraction(2 ** (m + 3) * (4 * m) ** m)  # 2^(r^2+5) / c_(r^2+2)
    t_mix = 16**3 * m**3
    case5 = tower.mul(
        tower.from_integer(6, prec),
        tower.pow_tower(
            tower.div(tower.from_integer(t_mix * r, prec), e_t, prec), r, prec),
        prec,
    )
    C1 = gamma_high
    two_c1_sq = tower.mul(tower.from_integer(2, prec),
                          tower.pow_tower(C1, 2, prec), prec)
    exp_2c1sq = tower.exp(two_c1_sq, prec)
    m_lower = tower.add(
        tower.ln(tower.from_integer(2, prec), prec),
        tower.mul(
            tower.from_integer(params.C0, prec),
            tower.add(tower.from_integer(1, prec),
                      tower.mul(tower.sqrt(C1, prec), exp_2c1sq, prec), prec),
            prec,
        ),
        prec,
    )
    return {
        "U": rough_embedding_constant(params.index_n, prec),
        "c_r2plus2": green_diagonal_constant(m),
        "t_r2plus2": green_diagonal_exact(m),
        "D0": D0,
        "t": t_mix,
        "case1": tower.mul(gamma_low,
                           tower.pow_tower(tower.from_rational(D0, prec), r + 1, prec),
                           prec),
        "case2": gamma_high,
        "case3": tower.from_integer(1, prec),
        "case4": tower.from_integer(3**r, prec),
        "case5": case5,
        "C1": C1,
        "exp_2C1sq": exp_2c1sq,
        "M_candidate": m_lower,
        "M_stated": _stated_m(10, prec),
        "epsilon_stated": tower.exp(_stated_m(10, prec), prec).reciprocal(),
        "survival_floor_index": survival_floor(params.index_n, Fraction(1, 2), prec),
    }


def _stated_m(inner_factor: int, prec: int) -> TowerReal:
    """exp(17 exp(inner_factor * 8^100))."""
    e8 = tower.pow_tower(tower.from_integer(8, prec), 100, prec)
    inner = tower.exp(tower.mul(tower.from_integer(inner_factor, prec), e8, prec), prec)
    return tower.exp(tower.mul(tower.from_integer(17, prec), inner, prec), prec)


def _final_scale(prec: int) -> TowerReal:
    """exp(-9 exp(100 * 8^100)), the final cluster-probability scale."""
    e8 = tower.pow_tower(tower.from_integer(8, prec), 100, prec)
    inner = tower.exp(tower.mul(tower.from_integer(100, prec), e8, prec), prec)
    return tower.exp(tower.mul(tower.from_integer(9, prec), inner, prec), prec).reciprocal()


# ---------------------------------------------------------------------------
# the certified chain
# ---------------------------------------------------------------------------


def _certify(name: str, statement: str, relation: str,
             left: Callable[[int], TowerReal], right: Callable[[int], TowerReal],
             role: str = "claim",
             prec: int = tower.DEFAULT_PRECISION) -> StepReport:
    cmp = tower.compare_refining(left, right, start_prec=prec)
    if relation in ("<", "<="):
        good = (Comparison.LESS,) if relation == "<" else (Comparison.LESS, Comparison.EQUAL)
        bad = (Comparison.GREATER, Comparison.EQUAL) if relation == "<" else (Comparison.GREATER,)
    elif relation in (">", ">="):
        good = (Comparison.GREATER,) if relation == ">" else (Comparison.GREATER, Comparison.EQUAL)
        bad = (Comparison.LESS, Comparison.EQUAL) if relation == ">" else (Comparison.LESS,)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    if cmp in good:
        status = StepStatus.CERTIFIED_TRUE
    elif cmp in bad:
        status = StepStatus.CERTIFIED_FALSE
    else:
        status = StepStatus.UNDECIDED
    try:
        l_val, r_val = left(prec), right(prec)
    except PrecisionLossError:
        l_val = r_val = None
    return StepReport(name, statement, relation, l_val, r_val, status, role)


def _sum_tail_partial(terms: int = 40):
    """Exact partial sum of (n-1)^2 / (2^(n+1) - 3) from n = 2, plus a tail bound.

    The tail uses (n-1)^2/L_n <= (n-1)^2 2^-n for n >= 2 and the closed
    form sum_{n>=N} (n-1)^2 2^-n = 2^-N (2(N-1)^2 + 4(N-1) + 6).
    """
    partial = sum(Fraction((n - 1) ** 2, 2 ** (n + 1) - 3) for n in range(2, terms + 1))
    N = terms + 1
    tail = Fraction(2 * (N - 1) ** 2 + 4 * (N - 1) + 6, 2**N)
    return partial, tail


def _green_sum_bound(terms: int = 40) -> Fraction:
    """Upper bound for sum_{n>=2} L_n^-2 with L_n = 2^(n+1) - 3."""
    partial = sum(Fraction(1, (2 ** (n + 1) - 3) ** 2) for n in range(2, terms + 1))
    # L_n >= 2^n for n >= 2, so the tail is below the geometric sum of 4^-n
    N = terms + 1
    tail = Fraction(4, 3 * 4**N)
    return partial + tail


def _m_candidate(branch: str, params: GapParams, prec: int) -> TowerReal:
    consts = named_constants(params, branch, prec)
    return consts["M_candidate"]


def _v_bound_expression(branch: str, params: GapParams, prec: int) -> TowerReal:
    """16 (2 log2 C1 - 1)^4 C1 / (e (2 C1^2 - 3))."""
    C1 = return_bound_constant(params.k, branch, params.C, prec)
    log2_c1 = tower.div(tower.ln(C1, prec),
                        tower.ln(tower.from_integer(2, prec), prec), prec)
    bracket = tower.sub(
        tower.mul(tower.from_integer(2, prec), log2_c1, prec),
        tower.from_integer(1, prec), prec)
    num = tower.mul(
        tower.from_integer(16, prec),
        tower.mul(tower.pow_tower(bracket, 4, prec), C1, prec), prec)
    den = tower.mul(
        tower.exp(tower.from_integer(1, prec), prec),
        tower.sub(tower.mul(tower.from_integer(2, prec),
                            tower.pow_tower(C1, 2, prec), prec),
                  tower.from_integer(3, prec), prec),
        prec)
    return tower.div(num, den, prec)


def certify_chain(params: GapParams = GapParams(),
                  prec: int = tower.DEFAULT_PRECISION) -> List[StepReport]:
    """One StepReport per checkable inequality of the gap derivation."""
    n = params.index_n
    r = params.r
    m = r * r + 2
    steps: List[StepReport] = []

    def U_of(p):
        return rough_embedding_constant(n, p)

    steps.append(_certify(
        "embedding_edge_images",
        f"2(8n-3)^n <= U = 2(8n-3)^(3n-2) at n = {n}: the number of edges a "
        "rough-embedded edge can map across is at most U",
        "<=",
        lambda p: tower.mul(tower.from_integer(2, p),
                            tower.pow_tower(tower.from_integer(8 * n - 3, p), n, p), p),
        U_of, prec=prec))

    steps.append(_certify(
        "embedding_edge_preimages",
        f"2(8n-3)^(n-1)(8n-4)^(2n-1) < U at n = {n}: the number of edges "
        "mapping onto a fixed edge is below U",
        "<",
        lambda p: tower.mul(
            tower.mul(tower.from_integer(2, p),
                      tower.pow_tower(tower.from_integer(8 * n - 3, p), n - 1, p), p),
            tower.pow_tower(tower.from_integer(8 * n - 4, p), 2 * n - 1, p), p),
        U_of, prec=prec))

    steps.append(_certify(
        "green_diagonal_n2",
        "t_2 = 1/(4^2 2!) > (4*2)^-2 = c_2: the exact diagonal constant "
        "dominates its closed-form floor at n = 2",
        ">",
        lambda p: tower.from_rational(green_diagonal_exact(2), p),
        lambda p: tower.from_rational(green_diagonal_constant(2), p), prec=prec))

    steps.append(_certify(
        "green_diagonal_r2plus2",
        f"t_{m} > c_{m}: same domination at n = r^2 + 2 = {m}",
        ">",
        lambda p: tower.from_rational(green_diagonal_exact(m), p),
        lambda p: tower.from_rational(green_diagonal_constant(m), p), prec=prec))

    # the five heat-kernel cases must all be dominated by gamma_(2r+2)
    def gamma_high(p):
        return return_bound_constant(params.k, "min", params.C, p)

    for label, case_fn in (
        ("case1_low_degree", lambda p: named_constants(params, "min", p)["case1"]),
        ("case3_unit", lambda p: tower.from_integer(1, p)),
        ("case4_small_times", lambda p: tower.from_integer(3**r, p)),
        ("case5_intermediate", lambda p: named_constants(params, "min", p)["case5"]),
    ):
        steps.append(_certify(
            f"kernel_{label}",
            f"gamma_{params.k} dominates the {label.replace('_', ' ')} constant, "
            "so a single constant C_1 covers every regime",
            ">=",
            gamma_high, case_fn, prec=prec))

    partial, tail = _sum_tail_partial()
    steps.append(_certify(
        "normal_tail_sum",
        "sum over n >= 2 of (n-1)^2 / (sqrt(108 pi) L_n) < 1, via exact "
        f"partial sums through n = 40 (= {float(partial):.6f}) plus a "
        "geometric tail bound",
        "<",
        lambda p: tower.from_rational(partial + tail, p),
        lambda p: tower.sqrt(tower.mul(tower.from_integer(108, p), tower.pi(p), p), p),
        prec=prec))

    for branch in BRANCHES:
        steps.append(_certify(
            f"peak_term_bound_{branch}",
            "16 (2 log2 C1 - 1)^4 C1 / (e (2 C1^2 - 3)) < 1 with C1 = "
            f"gamma_{params.k} under the {branch} reading; this pins the "
            "maximizing index below 2 log2 C1",
            "<",
            lambda p, b=branch: _v_bound_expression(b, params, p),
            lambda p: tower.from_integer(1, p), prec=prec))

    green_sum = _green_sum_bound()
    steps.append(_certify(
        "green_margin",
        f"(sum over n >= 2 of L_n^-2)/2 < 1/25 (exact rationals; sum bound "
        f"{float(green_sum):.6f})",
        "<",
        lambda p: tower.from_rational(green_sum / 2, p),
        lambda p: tower.from_rational(Fraction(1, 25), p), prec=prec))

    # 1 + (C1/2D) sum L_n^-2 < C1/25D rearranges exactly (C1 > 0) to
    # C1 (1/25D - sum/2D) > 1; at D = 3 the rational margin is exact, so
    # the comparison never has to subtract towers
    green_margin_at_3 = Fraction(1, 75) - green_sum / 6
    assert green_margin_at_3 > 0
    for branch in BRANCHES:
        steps.append(_certify(
            f"green_total_at_D3_{branch}",
            "1 + (C1/2D) sum L_n^-2 < C1/25D at D = 3 under the "
            f"{branch} reading; rearranged to C1 > 1/(1/75 - sum/6) = "
            f"{float(1 / green_margin_at_3):.3f} since both sides scale with C1",
            ">",
            lambda p, b=branch: return_bound_constant(params.k, b, params.C, p),
            lambda p: tower.from_rational(1 / green_margin_at_3, p),
            prec=prec))

    probe_status = {}
    for branch in BRANCHES:
        step = _certify(
            f"m_candidate_{branch}",
            "log 2 + C0 (1 + sqrt(C1) e^(2 C1^2)) <= exp(17 exp(10*8^100)) "
            f"under the {branch} reading of the growth constant inside gamma_k",
            "<=",
            lambda p, b=branch: _m_candidate(b, params, p),
            lambda p: _stated_m(10, p),
            role="probe", prec=prec)
        probe_status[branch] = step.status
        steps.append(step)

    if all(s is StepStatus.CERTIFIED_TRUE for s in probe_status.values()):
        m_status = StepStatus.CERTIFIED_TRUE
    elif all(s is StepStatus.CERTIFIED_FALSE for s in probe_status.values()):
        m_status = StepStatus.CERTIFIED_FALSE
    else:
        m_status = StepStatus.UNDECIDED
    steps.append(StepReport(
        "m_works",
        "the stated bound M = exp(17 exp(10*8^100)) dominates the sum bound "
        "log 2 + C0 (1 + sqrt(C1) e^(2 C1^2)); the truth depends on which "
        "branch of the effective growth constant gamma_k refers to "
        f"(per-branch probes: { {b: s.value for b, s in probe_status.items()} }), "
        "so the claim is left Undecided rather than guessing the intent",
        "<=", None, None, m_status, role="claim"))

    steps.append(_certify(
        "m_exponent_weakening",
        "exp(17 exp(10*8^100)) < exp(17 exp(100*8^100)): the gap statement "
        "weakens the inner exponent from 10 to 100",
        "<",
        lambda p: _stated_m(10, p), lambda p: _stated_m(100, p), prec=prec))

    for branch in BRANCHES:
        steps.append(_certify(
            f"m_candidate_vs_gap_exponent_{branch}",
            "the sum-bound candidate also fits under exp(17 exp(100*8^100)) "
            f"({branch} reading); flags how the 10-vs-100 exponents relate",
            "<=",
            lambda p, b=branch: _m_candidate(b, params, p),
            lambda p: _stated_m(100, p),
            role="probe", prec=prec))

    steps.append(_certify(
        "index_reduction_floor",
        f"((2U)^-1 log 2)^((8n-4)U) > exp(-M) at n = {n}: the survival floor "
        "of the index-n reduction exceeds epsilon = e^-M, so a single "
        "epsilon works for every group",
        ">",
        lambda p: survival_floor(n, Fraction(1, 2), p),
        lambda p: tower.exp(_stated_m(10, p), p).reciprocal(), prec=prec))

    for branch in BRANCHES:
        steps.append(_certify(
            f"index_reduction_floor_vs_candidate_{branch}",
            f"the same floor exceeds exp(-M_candidate) under the {branch} "
            "reading, so the reduction is safe for either intent",
            ">",
            lambda p: survival_floor(n, Fraction(1, 2), p),
            lambda p, b=branch: tower.exp(_m_candidate(b, params, p), p).reciprocal(),
            role="probe", prec=prec))

    steps.append(_certify(
        "survival_floor_variant",
        "the log(3/2) variant of the floor (p = 2/3) is below the log 2 "
        "variant (p = 1/2), as log(3/2) < log 2",
        "<",
        lambda p: survival_floor(n, Fraction(2, 3), p),
        lambda p: survival_floor(n, Fraction(1, 2), p), prec=prec))

    for branch in BRANCHES:
        steps.append(_certify(
            f"final_scale_absorbs_C1_{branch}",
            "C1 <= 25 exp(9 exp(100*8^100)): the final display's exponent 9 "
            f"absorbs the prefactors of C1/25D under the {branch} reading",
            "<=",
            lambda p, b=branch: return_bound_constant(params.k, b, params.C, p),
            lambda p: tower.mul(tower.from_integer(25, p),
                                _final_scale(p).reciprocal(), p), prec=prec))

    steps.append(_certify(
        "final_cluster_probability",
        "1 - exp(-D^2 q) > q for q = exp(-9 exp(100*8^100)) and all D >= 3: "
        "since 1 - e^-u >= u/(1+u), it suffices that q < (D^2-1)/D^2, and "
        "the worst case D = 3 needs q < 8/9",
        "<",
        _final_scale,
        lambda p: tower.from_rational(Fraction(8, 9), p), prec=prec))

    return steps


def worst_status(steps: List[StepReport]) -> StepStatus:
    """Aggregate status over claims (probes are informational)."""
    claims = [s for s in steps if s.role == "claim"]
    if any(s.status is StepStatus.CERTIFIED_FALSE for s in claims):
        return StepStatus.CERTIFIED_FALSE
    if any(s.status is StepStatus.UNDECIDED for s in claims):
        return StepStatus.UNDECIDED
    return StepStatus.CERTIFIED_TRUE
