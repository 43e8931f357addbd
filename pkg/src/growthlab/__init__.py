"""growthlab: exact word-growth computations for finitely generated groups.

Exact Cayley-ball enumeration for concrete matrix/abelian/cyclic groups,
commutator word calculus, closed-form growth bounds, affine Coxeter growth
series, exact lazy-walk heat kernels, and a certified-interval number type
for constants as large as exp(exp(17 exp(100*8^100))).
"""

from .bounds import (
    BoundReport,
    BoundStatus,
    ball_floor_min_degree,
    ball_floor_nilpotent,
    ball_floor_vertex_transitive,
    ball_floor_virtually_nilpotent,
    finiteness_report,
    isoperimetric_bounds,
    linear_growth_criterion,
    min_growth_constant,
    minkowski_bound,
    return_probability_bound,
)
from .coxeter import (
    CoxeterDatum,
    GrowthSeries,
    asymptotic_constant,
    bott_cumulative_series,
    builtin,
    mg_window,
)
from .groups import (
    BallProfile,
    DirectProduct,
    FiniteCyclic,
    FreeAbelian,
    GroupModel,
    IntegerMatrixGroup,
    ball_profile,
    build_group,
    builtin_group,
    subgroup_ball_count,
    vertex_boundary_size,
)
from .heat import HeatSeries, check_return_bounds, lazy_step, measured_growth_constant, return_series
from .nilpotent import (
    RankVector,
    growth_degree,
    hirsch_length,
    max_class,
    multilinearity_check,
    validate_torsion_free,
)
from .percolation import (
    GapParams,
    StepReport,
    StepStatus,
    adjusted_site_parameter,
    certify_chain,
    return_bound_constant,
    rough_embedding_constant,
    survival_floor,
)
from .tower import (
    Comparison,
    TowerReal,
    compare,
    format_tower,
    from_factorial,
    from_integer,
    from_rational,
    parse_tower,
)
from .words import (
    Word,
    commutator_word_length,
    evaluate_word,
    free_reduce,
    parse_word,
    simple_commutator_word,
)

__version__ = "0.1.0"
