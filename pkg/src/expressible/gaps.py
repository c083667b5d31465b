"""Verification of the gap conditions behind the dimension bounds.

Two neighbouring children of a level-``n-1`` parent, with digits
``x < y`` at level ``n``, are separated by

    1/(x a_n) - 1/(y a_n) + sum_{k>n} 1/(a_k max D_k) - sum_{k>n} 1/a_k,

independently of the parent's partial sum.  The doubly exponential families
guarantee this is positive once the smallest digit-term difference beats
``(1 + eps)`` times the full tail ``sum_{k>n} 1/a_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from gmpy2 import mpq, mpz

from .cantor import DEFAULT_ENUMERATION_BUDGET, build_level, children
from .enclosure import MAX_DIGIT, MIN_DIGIT, Enclosure, full_tail_enclosure, min_term_gap, tail_enclosure
from .errors import NotFoundError, ValidationError
from .logs import ln_enclosure
from .sequences import Family, as_rational, digit_set, rational_str


class Verdict(str, Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INDETERMINATE = "indeterminate"

    def __str__(self):
        return self.value


def epsilon_n(family: Family, n: int, epsilon=1) -> mpq | None:
    """Theoretical gap lower bound ``eps_n`` for level ``n`` of the family."""
    seq, digits = family.sequence, family.digits
    epsilon = as_rational(epsilon)
    if family.theorem == "thm1":
        b, K = seq.b, digits.K
        return (1 / b**n) * mpq(1, K) * (mpq(1, K + 1) + (1 - K) / (b - 1))
    if family.theorem == "thm2":
        return epsilon / (mpz(2) ** (seq.N ** (n + 1)) * seq.f(n + 1))
    if family.theorem == "thm3":
        return epsilon / mpz(seq.N) ** (2 ** (n + 1))
    return None


def check_minbound2(seq, digits, n: int, epsilon=1, T: int | None = None) -> Verdict:
    """Decide ``min digit-term gap at level n >= (1 + eps) sum_{k>n} 1/a_k``."""
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    gap = min_term_gap(seq, digits, n)
    tail = full_tail_enclosure(seq, digits, n, T)
    if gap >= (1 + epsilon) * tail.hi:
        return Verdict.CERTIFIED
    if gap < (1 + epsilon) * tail.lo:
        return Verdict.REFUTED
    return Verdict.INDETERMINATE


# ---------------------------------------------------------------------------
# closed-form threshold n_0(eps)


def threshold_exponent(family: Family, n: int) -> mpq:
    """Exponent ``E(n)`` of the sufficient inequality ``base**E(n) - 2 >= 2 eps``."""
    seq, digits = family.sequence, family.digits
    r = digits.r
    if family.theorem == "thm2":
        N = seq.N
        return (N - 2 * r - 1) * N**n - (1 + 2 * r) * (N - 1) ** n
    if family.theorem == "thm3":
        return (1 - 2 * r) * 2**n - (1 + 2 * r) * (2 - family.eta) ** n
    raise ValidationError("closed-form thresholds exist for thm2 and thm3 only")


def power_at_least(base: int, exponent, bound) -> bool:
    """Certified comparison ``base**exponent >= bound`` for rational arguments, ``bound > 1``."""
    exponent, bound = as_rational(exponent), as_rational(bound)
    if exponent <= 0:
        return bound <= 1
    bits = 64
    while bits <= 4096:
        lhs = ln_enclosure(base, bits) * exponent
        rhs = ln_enclosure(bound, bits)
        if lhs.lo >= rhs.hi:
            return True
        if lhs.hi < rhs.lo:
            return False
        bits *= 4
    # numerically tied: settle exactly
    u, v = exponent.numerator, exponent.denominator
    p, q = bound.numerator, bound.denominator
    return mpz(base) ** u * q**v >= p**v


def closed_form_condition(family: Family, n: int, epsilon=1) -> bool:
    """``eps <= (base**E(n) - 2) / 2`` with ``base = 2`` (thm2) or ``N`` (thm3)."""
    epsilon = as_rational(epsilon)
    base = 2 if family.theorem == "thm2" else family.sequence.N
    return power_at_least(base, threshold_exponent(family, n), 2 * epsilon + 2)


@dataclass(frozen=True)
class ThresholdResult:
    """Least level satisfying the closed-form inequality, with its range certificate."""

    n0: int
    n_max: int
    exponents: tuple
    exponent_increasing: bool
    holds_on_range: bool

    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "n_max": self.n_max,
            "exponents": [[n, rational_str(e)] for n, e in self.exponents],
            "exponent_increasing": self.exponent_increasing,
            "holds_on_range": self.holds_on_range,
        }


def find_n0(family: Family, epsilon=1, n_max: int = 40) -> ThresholdResult:
    """Smallest ``n <= n_max`` at which the closed-form sufficient inequality holds.

    The result also certifies, by exact comparison, that the exponent
    increases on ``[n0, n_max]`` and that the inequality holds at every
    level of that range.  Nothing is claimed beyond ``n_max``.
    """
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    for n in range(1, n_max + 1):
        if closed_form_condition(family, n, epsilon):
            n0 = n
            break
    else:
        raise NotFoundError(f"no n <= {n_max} satisfies the closed-form inequality")
    exps = tuple((k, threshold_exponent(family, k)) for k in range(n0, n_max + 1))
    increasing = all(b > a for (_, a), (_, b) in zip(exps, exps[1:]))
    holds = all(closed_form_condition(family, k, epsilon) for k in range(n0, n_max + 1))
    return ThresholdResult(n0, n_max, exps, increasing, holds)


# ---------------------------------------------------------------------------
# measured gaps


@dataclass(frozen=True)
class GapReport:
    level: int
    epsilon_used: mpq
    epsilon_n: mpq | None
    measured_min_gap: Enclosure | None = None
    minbound2_holds: Verdict | None = None
    gap_bound: Verdict | None = None
    implication_ok: bool | None = None
    parents_scanned: int | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def degenerate(self) -> bool:
        return self.measured_min_gap is None

    @property
    def certified(self) -> bool:
        return self.gap_bound is Verdict.CERTIFIED

    def to_dict(self) -> dict:
        gap = self.measured_min_gap
        return {
            "level": self.level,
            "epsilon_used": rational_str(self.epsilon_used),
            "epsilon_n": None if self.epsilon_n is None else rational_str(self.epsilon_n),
            "measured_min_gap": None if gap is None else {"lo": rational_str(gap.lo), "hi": rational_str(gap.hi)},
            "minbound2_holds": None if self.minbound2_holds is None else str(self.minbound2_holds),
            "gap_bound": None if self.gap_bound is None else str(self.gap_bound),
            "implication_ok": self.implication_ok,
            "parents_scanned": self.parents_scanned,
            "notes": list(self.notes),
        }


def measured_min_gap(seq, digits, n: int, T: int | None = None) -> Enclosure:
    """Worst-case gap between neighbouring level-``n`` children of any parent."""
    gap = min_term_gap(seq, digits, n)
    tmax = tail_enclosure(seq, digits, n, MAX_DIGIT, T)
    tmin = tail_enclosure(seq, digits, n, MIN_DIGIT, T)
    return Enclosure(gap + tmax.lo - tmin.hi, gap + tmax.hi - tmin.lo)


def scanned_min_gap(seq, digits, n: int, T: int | None = None, budget: int = DEFAULT_ENUMERATION_BUDGET):
    """Same quantity as :func:`measured_min_gap`, found by enumerating every
    parent at level ``n - 1`` and every adjacent pair of its children."""
    parents = build_level(seq, digits, n - 1, budget=budget)
    lo = hi = None
    for parent in parents:
        kids = children(seq, digits, parent.prefix, T)
        # increasing digit order = decreasing position
        for upper, lower in zip(kids, kids[1:]):
            g_lo = upper.left.lo - lower.right.hi
            g_hi = upper.left.hi - lower.right.lo
            lo = g_lo if lo is None else min(lo, g_lo)
            hi = g_hi if hi is None else min(hi, g_hi)
    return Enclosure(lo, hi), len(parents)


def _compare(enc: Enclosure, bound) -> Verdict:
    if enc.lo >= bound:
        return Verdict.CERTIFIED
    if enc.hi < bound:
        return Verdict.REFUTED
    return Verdict.INDETERMINATE


def gap_report_for_level(
    family: Family,
    n: int,
    epsilon=1,
    T: int | None = None,
    exhaustive: bool = False,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> GapReport:
    """Measured minimum gap at level ``n`` against the family's ``eps_n``.

    ``exhaustive=True`` enumerates all parents (subject to ``budget``);
    otherwise the parent-independent closed route is used.
    """
    seq, digits = family.sequence, family.digits
    epsilon = as_rational(epsilon)
    eps_n = epsilon_n(family, n, epsilon)
    if digit_set(digits, seq, n).count < 2:
        return GapReport(n, epsilon, eps_n, notes=("single child per parent: no gaps",))

    if exhaustive:
        gap, scanned = scanned_min_gap(seq, digits, n, T, budget)
    else:
        gap, scanned = measured_min_gap(seq, digits, n, T), None
    mb2 = check_minbound2(seq, digits, n, epsilon, T)
    bound = None if eps_n is None else _compare(gap, eps_n)
    implication = None
    if mb2 is Verdict.CERTIFIED:
        tail = full_tail_enclosure(seq, digits, n, T)
        implication = gap.lo >= epsilon * tail.lo
    return GapReport(n, epsilon, eps_n, gap, mb2, bound, implication, scanned)


def thm1_gap_formula(b, K: int, n: int, k: int) -> mpq:
    """Gap between digits ``k`` and ``k + 1`` at level ``n`` for ``a_n = b^n``, ``D = {1..K}``."""
    b = as_rational(b)
    return (1 / b**n) * mpq(1, k * (k + 1)) + (mpq(1, K) - 1) * (1 / b**n) / (b - 1)
