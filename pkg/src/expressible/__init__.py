"""Exact constructions for expressible sets ``{sum 1/(a_n d_n) : d_n in D_n}``.

The package builds the nested Cantor intervals behind these sets with exact
rational arithmetic, certifies the gap inequalities that make the intervals
disjoint, and evaluates Hausdorff dimension lower bounds and box-counting
estimates.
"""

from .cantor import (
    LevelInterval,
    build_level,
    children,
    classify_adjacent,
    interval_for_prefix,
    level_count,
    point_from_digits,
)
from .dimension import (
    bf_ratio,
    boxcount_estimate,
    boxcount_levels,
    closed_form_limit,
    family_bound_sequence,
)
from .enclosure import Enclosure, min_term_gap, tail_enclosure
from .errors import (
    BudgetExceededError,
    DegenerateDigitSetError,
    DepthExceededError,
    ExpressibleError,
    HypothesisViolationError,
    InconsistentSpecError,
    InsufficientDataError,
    NotApplicableError,
    NotFoundError,
    ValidationError,
)
from .gaps import Verdict, check_minbound2, find_n0, gap_report_for_level
from .logs import ln_enclosure
from .probe import decode_digits, exponent_probe, growth_limit_sequence, telescoping_check
from .sequences import (
    DoubleExpPow,
    Explicit,
    ExplicitPerLevel,
    Family,
    Geometric,
    GrowthFunction,
    Recurrence,
    TheoremFamily,
    UniformRange,
    digit_set,
    term,
    thm1_family,
    thm2_family,
    thm3_family,
    validate_family,
    validate_spec,
)

__version__ = "0.1.0"
