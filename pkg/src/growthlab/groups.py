"""Concrete finitely generated groups with exact element algebra.

Four families are supported: integer matrix groups (entries are
arbitrary-precision integers, generators must be invertible over the
integers), free abelian groups, finite cyclic groups, and direct products
of these.  Every element carries a canonical byte key so that equality,
deduplication, and hashing agree with group equality.

Ball enumeration is a level-synchronous breadth-first search over the
symmetrized generating set, with the element budget checked per level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Tuple, Union

from .errors import (
    BudgetExceeded,
    EmptyGeneratorSet,
    IdentityGenerator,
    NonInvertibleGenerator,
)

Matrix = Tuple[Tuple[int, ...], ...]

DEFAULT_BUDGET = 10**7


# ---------------------------------------------------------------------------
# group specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerMatrixGroup:
    dimension: int
    generators: Tuple[Matrix, ...]


@dataclass(frozen=True)
class FreeAbelian:
    rank: int


@dataclass(frozen=True)
class FiniteCyclic:
    order: int


@dataclass(frozen=True)
class DirectProduct:
    factors: Tuple["GroupSpec", ...]


GroupSpec = Union[IntegerMatrixGroup, FreeAbelian, FiniteCyclic, DirectProduct]


# ---------------------------------------------------------------------------
# exact integer matrix helpers
# ---------------------------------------------------------------------------


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_det(a: Matrix) -> int:
    """Fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix via the adjugate."""
    n = len(a)
    det = mat_det(a)
    if det not in (1, -1):
        raise NonInvertibleGenerator(f"determinant {det} is not a unit")
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(a[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            cof[i][j] = (-1) ** (i + j) * (mat_det(minor) if n > 1 else 1)
    # adjugate is the transposed cofactor matrix; det is +-1
    return tuple(tuple(det * cof[j][i] for j in range(n)) for i in range(n))


def _int_key(v: int) -> bytes:
    """Length-prefixed big-endian two's-complement encoding."""
    nbytes = (v.bit_length() + 8) // 8 or 1
    body = v.to_bytes(nbytes, "big", signed=True)
    return len(body).to_bytes(4, "big") + body


def _ints_key(vs: Iterable[int]) -> bytes:
    return b"".join(_int_key(v) for v in vs)


# ---------------------------------------------------------------------------
# group models
# ---------------------------------------------------------------------------


class GroupModel:
    """Exact group operations plus a canonical byte key per element.

    Elements are immutable hashable values (nested integer tuples); the
    model itself holds no mutable state, so models and elements can be
    shared freely between threads.
    """

    def __init__(self, name: str, identity, compose, inverse, key, generators):
        self.name = name
        self.identity = identity
        self.compose = compose
        self.inverse = inverse
        self.key = key
        base: list = []
        sym: list = []
        seen = set()
        idk = key(identity)
        for g in generators:
            if key(g) not in seen:
                base.append(g)
            for h in (g, inverse(g)):
                k = key(h)
                if k != idk and k not in seen:
                    seen.add(k)
                    sym.append(h)
        self.base_generators = tuple(base)
        self.generators = tuple(sym)

    @property
    def valency(self) -> int:
        """Distinct non-identity symmetric generators (simple-graph valency)."""
        return len(self.generators)


def build_group(spec: GroupSpec, name: str = "") -> GroupModel:
    if isinstance(spec, IntegerMatrixGroup):
        return _build_matrix_group(spec, name or f"matrix({spec.dimension})")
    if isinstance(spec, FreeAbelian):
        return _build_free_abelian(spec, name or f"Z^{spec.rank}")
    if isinstance(spec, FiniteCyclic):
        return _build_cyclic(spec, name or f"Z/{spec.order}")
    if isinstance(spec, DirectProduct):
        return _build_product(spec, name or "product")
    raise TypeError(f"not a group spec: {spec!r}")


def _build_matrix_group(spec: IntegerMatrixGroup, name: str) -> GroupModel:
    if not spec.generators:
        raise EmptyGeneratorSet("matrix group needs at least one generator")
    n = spec.dimension
    ident = mat_identity(n)
    gens = []
    for g in spec.generators:
        g = tuple(tuple(int(v) for v in row) for row in g)
        if len(g) != n or any(len(row) != n for row in g):
            raise NonInvertibleGenerator(f"generator is not {n}x{n}")
        d = mat_det(g)
        if d not in (1, -1):
            raise NonInvertibleGenerator(f"determinant {d} is not in {{+1,-1}}")
        if g == ident:
            raise IdentityGenerator("generator equals the identity matrix")
        gens.append(g)

    def key(m: Matrix) -> bytes:
        return _ints_key(v for row in m for v in row)

    return GroupModel(name, ident, mat_mul, mat_inverse, key, gens)


def _build_free_abelian(spec: FreeAbelian, name: str) -> GroupModel:
    if spec.rank < 1:
        raise EmptyGeneratorSet("free abelian rank must be positive")
    r = spec.rank
    ident = (0,) * r
    gens = [tuple(int(i == j) for j in range(r)) for i in range(r)]

    def compose(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inverse(a):
        return tuple(-x for x in a)

    return GroupModel(name, ident, compose, inverse, _ints_key, gens)


def _build_cyclic(spec: FiniteCyclic, name: str) -> GroupModel:
    if spec.order < 1:
        raise EmptyGeneratorSet("cyclic order must be positive")
    k = spec.order
    if k == 1:
        raise IdentityGenerator("the trivial group's generator is the identity")

    def compose(a, b):
        return (a + b) % k

    def inverse(a):
        return (-a) % k

    def key(a):
        return _int_key(a)

    return GroupModel(name, 0, compose, inverse, key, [1])


def _build_product(spec: DirectProduct, name: str) -> GroupModel:
    if not spec.factors:
        raise EmptyGeneratorSet("direct product needs at least one factor")
    models = [build_group(f) for f in spec.factors]
    ident = tuple(m.identity for m in models)
    gens = []
    for i, m in enumerate(models):
        for g in m.generators:
            gens.append(tuple(g if j == i else models[j].identity for j in range(len(models))))

    def compose(a, b):
        return tuple(m.compose(x, y) for m, x, y in zip(models, a, b))

    def inverse(a):
        return tuple(m.inverse(x) for m, x in zip(models, a))

    def key(a):
        return b"".join(
            len(part := m.key(x)).to_bytes(4, "big") + part for m, x in zip(models, a)
        )

    return GroupModel(name, ident, compose, inverse, key, gens)


# ---------------------------------------------------------------------------
# ball enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallProfile:
    """Cumulative ball sizes s_0..s_R and sphere counts a_1..a_R."""

    radius: int
    cumulative: Tuple[int, ...]
    spheres: Tuple[int, ...]
    exhausted: bool

    def __post_init__(self):
        assert self.cumulative[0] == 1
        assert len(self.cumulative) == self.radius + 1
        assert len(self.spheres) == self.radius

    def sphere(self, n: int) -> int:
        return self.spheres[n - 1]

    def size(self, n: int) -> int:
        return self.cumulative[n]


def enumerate_ball(model: GroupModel, radius: int, budget: int = DEFAULT_BUDGET,
                   keep_elements: bool = False):
    """(BallProfile, levels) with levels a list of per-radius element lists.

    ``levels`` is populated only when ``keep_elements`` is set; the BFS is
    deterministic for a fixed model regardless of generator insertion order
    because frontiers are expanded in enumeration order of the previous
    level and generator order is fixed by the model.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if budget < 1:
        raise ValueError("budget must be positive")
    ident = model.identity
    seen = {model.key(ident)}
    frontier = [ident]
    cumulative = [1]
    levels = [[ident]] if keep_elements else None
    exhausted = False
    for _ in range(radius):
        if exhausted:
            cumulative.append(cumulative[-1])
            if keep_elements:
                levels.append([])
            continue
        new = []
        for g in frontier:
            for x in model.generators:
                h = model.compose(g, x)
                k = model.key(h)
                if k not in seen:
                    seen.add(k)
                    new.append(h)
        if len(seen) > budget:
            raise BudgetExceeded(completed_radius=len(cumulative) - 1, budget=budget)
        cumulative.append(len(seen))
        if keep_elements:
            levels.append(new)
        if not new:
            exhausted = True
        frontier = new
    spheres = tuple(cumulative[i + 1] - cumulative[i] for i in range(radius))
    profile = BallProfile(radius, tuple(cumulative), spheres, exhausted)
    return profile, levels


def ball_profile(model: GroupModel, radius: int, budget: int = DEFAULT_BUDGET) -> BallProfile:
    profile, _ = enumerate_ball(model, radius, budget)
    return profile


def ball_elements(model: GroupModel, radius: int, budget: int = DEFAULT_BUDGET) -> List[list]:
    _, levels = enumerate_ball(model, radius, budget, keep_elements=True)
    return levels


def subgroup_ball_count(model: GroupModel, radius: int, member: Callable,
                        budget: int = DEFAULT_BUDGET) -> int:
    """|B_radius ∩ H| for H given by a membership predicate."""
    levels = ball_elements(model, radius, budget)
    return sum(1 for level in levels for g in level if member(g))


def vertex_boundary_size(model: GroupModel, elements: Iterable) -> int:
    """Exact size of the vertex boundary A(X ∪ X^-1) \\ A."""
    inside = {model.key(g): g for g in elements}
    if not inside:
        raise ValueError("boundary of the empty set is undefined here")
    outside = set()
    for g in inside.values():
        for x in model.generators:
            h = model.compose(g, x)
            k = model.key(h)
            if k not in inside:
                outside.add(k)
    return len(outside)


# ---------------------------------------------------------------------------
# built-in registry
# ---------------------------------------------------------------------------


def unitriangular_generators(n: int) -> Tuple[Matrix, ...]:
    """Superdiagonal elementary matrices generating the n x n unitriangular group."""
    gens = []
    for i in range(n - 1):
        m = [[int(a == b) for b in range(n)] for a in range(n)]
        m[i][i + 1] = 1
        gens.append(tuple(tuple(row) for row in m))
    return tuple(gens)


def heisenberg_spec() -> IntegerMatrixGroup:
    return IntegerMatrixGroup(3, unitriangular_generators(3))


def unitriangular_spec(n: int) -> IntegerMatrixGroup:
    return IntegerMatrixGroup(n, unitriangular_generators(n))


def infinite_dihedral_spec() -> IntegerMatrixGroup:
    # two integer reflection matrices of determinant -1; their product has
    # infinite order, and balls grow as s_n = 2n+1
    a = ((-1, 0), (0, 1))
    b = ((-1, 1), (0, 1))
    return IntegerMatrixGroup(2, (a, b))


def builtin_group(name: str) -> GroupModel:
    """Resolve registry names like ``zd:3``, ``heisenberg``, ``ut:4``, ``cyclic:5``."""
    token = name.strip().lower()
    if token in ("z", "zd:1"):
        return build_group(FreeAbelian(1), "Z")
    if token.startswith("zd:"):
        d = int(token.split(":", 1)[1])
        return build_group(FreeAbelian(d), f"Z^{d}")
    if token == "heisenberg":
        return build_group(heisenberg_spec(), "heisenberg")
    if token.startswith("ut:"):
        n = int(token.split(":", 1)[1])
        if n < 2:
            raise ValueError("unitriangular groups need dimension >= 2")
        return build_group(unitriangular_spec(n), f"UT_{n}")
    if token.startswith("cyclic:"):
        k = int(token.split(":", 1)[1])
        return build_group(FiniteCyclic(k), f"Z/{k}")
    if token == "dihedralinf":
        return build_group(infinite_dihedral_spec(), "D_inf")
    raise ValueError(f"unknown builtin group {name!r}")


# ---------------------------------------------------------------------------
# JSON group-spec files
# ---------------------------------------------------------------------------


def spec_from_json(doc: dict) -> GroupSpec:
    """Parse the on-disk JSON form (matrix entries as decimal strings)."""
    kind = doc.get("type")
    if kind == "integer_matrix":
        dim = int(doc["dimension"])
        gens = []
        for flat in doc["generators"]:
            if len(flat) != dim * dim:
                raise ValueError("matrix entry count does not match dimension")
            vals = [int(v) for v in flat]
            gens.append(tuple(tuple(vals[i * dim + j] for j in range(dim)) for i in range(dim)))
        return IntegerMatrixGroup(dim, tuple(gens))
    if kind == "free_abelian":
        return FreeAbelian(int(doc["rank"]))
    if kind == "finite_cyclic":
        return FiniteCyclic(int(doc["order"]))
    if kind == "direct_product":
        return DirectProduct(tuple(spec_from_json(f) for f in doc["factors"]))
    raise ValueError(f"unknown group spec type {kind!r}")


def spec_to_json(spec: GroupSpec) -> dict:
    if isinstance(spec, IntegerMatrixGroup):
        return {
            "type": "integer_matrix",
            "dimension": spec.dimension,
            "generators": [[str(v) for row in g for v in row] for g in spec.generators],
        }
    if isinstance(spec, FreeAbelian):
        return {"type": "free_abelian", "rank": spec.rank}
    if isinstance(spec, FiniteCyclic):
        return {"type": "finite_cyclic", "order": spec.order}
    if isinstance(spec, DirectProduct):
        return {"type": "direct_product", "factors": [spec_to_json(f) for f in spec.factors]}
    raise TypeError(f"not a group spec: {spec!r}")
