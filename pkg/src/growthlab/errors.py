"""Exception types shared across the package."""


class GrowthLabError(Exception):
    """Base class for all package-specific errors."""


class NonInvertibleGenerator(GrowthLabError):
    """A generator matrix has determinant outside {+1, -1}."""


class EmptyGeneratorSet(GrowthLabError):
    """A group spec supplied no generators."""


class IdentityGenerator(GrowthLabError):
    """A generator equals the identity element."""


class BudgetExceeded(GrowthLabError):
    """Ball enumeration ran out of its element budget.

    ``completed_radius`` is the largest radius whose sphere was fully
    enumerated before the budget ran out.
    """

    def __init__(self, completed_radius: int, budget: int):
        self.completed_radius = completed_radius
        self.budget = budget
        super().__init__(
            f"element budget {budget} exceeded; largest completed radius is {completed_radius}"
        )


class IndexOutOfRange(GrowthLabError):
    """A word letter refers to a generator index with no assigned element."""


class ArityMismatch(GrowthLabError):
    """Number of supplied elements or exponents differs from the expected arity."""


class DegreeTooSmall(GrowthLabError):
    """A degree parameter is below the range where the formula applies."""


class UnknownFamily(GrowthLabError):
    """Requested a Coxeter family that is not built in."""


class NonPositiveInput(GrowthLabError):
    """Tower reals represent positive numbers only."""


class DomainError(GrowthLabError):
    """Operand outside the mathematical domain of the operation."""


class PrecisionLossError(GrowthLabError):
    """Interval arithmetic cannot produce a useful enclosure.

    Raised when an operation would need to subtract nearly equal
    iterated-exponential quantities; callers that certify inequalities
    treat it as an Undecided outcome and may retry at higher precision.
    """
