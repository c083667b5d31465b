"""Level-by-level generalized Cantor structure of an expressible set.

A digit prefix ``(d_1, ..., d_n)`` fixes the partial sum
``alpha = sum_{k<=n} 1/(a_k d_k)``.  Every point of the set with that prefix
lies between

* the left endpoint ``alpha + sum_{j>n} 1/(a_j max D_j)`` and
* the right endpoint ``alpha + sum_{j>n} 1/a_j``,

both of which are carried as rational enclosures.  Larger digits give
smaller points, so children of one parent appear in decreasing digit order
from left to right.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from .enclosure import MAX_DIGIT, MIN_DIGIT, Enclosure, default_tail_depth, tail_enclosure
from .errors import BudgetExceededError, ValidationError
from .sequences import DigitSetSpec, SequenceSpec, digit_count, digit_set, rational_str, term

DEFAULT_ENUMERATION_BUDGET = 10**6

SEPARATED = "separated"
INDETERMINATE = "indeterminate"
OVERLAPPING = "overlapping"

REPEAT_LAST = "repeat-last"


@dataclass(frozen=True)
class LevelInterval:
    prefix: tuple
    left: Enclosure
    right: Enclosure

    @property
    def level(self) -> int:
        return len(self.prefix)

    @property
    def hull(self) -> Enclosure:
        """Smallest enclosure certainly containing the whole interval."""
        return Enclosure(self.left.lo, max(self.right.hi, self.left.lo))

    @property
    def certainly_nondegenerate(self) -> bool:
        return self.left.hi <= self.right.lo

    def may_contain(self, x: Enclosure) -> bool:
        return x.hi >= self.left.lo and x.lo <= self.right.hi

    def certainly_contains(self, x: Enclosure) -> bool:
        return self.left.hi <= x.lo and x.hi <= self.right.lo


def validate_prefix(seq: SequenceSpec, digits: DigitSetSpec, prefix: Sequence[int]) -> tuple:
    prefix = tuple(mpz(d) for d in prefix)
    for k, d in enumerate(prefix, start=1):
        if d not in digit_set(digits, seq, k):
            raise ValidationError(f"digit {d} is not in D_{k}")
    return prefix


def prefix_sum(seq: SequenceSpec, prefix: Sequence[int]) -> mpq:
    """Exact ``alpha = sum_{k<=n} 1/(a_k d_k)``."""
    total = mpq(0)
    for k, d in enumerate(prefix, start=1):
        total += 1 / (term(seq, k) * d)
    return total


def interval_for_prefix(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    prefix: Sequence[int],
    T: int | None = None,
) -> LevelInterval:
    prefix = validate_prefix(seq, digits, prefix)
    n = len(prefix)
    return _interval(seq, digits, prefix, prefix_sum(seq, prefix), _depth(seq, n, T))


def _depth(seq, n, T):
    T = default_tail_depth(seq, n) if T is None else T
    if T < n + 1:
        raise ValueError(f"tail depth T={T} must be at least level + 1 = {n + 1}")
    return T


def _interval(seq, digits, prefix, alpha, T) -> LevelInterval:
    n = len(prefix)
    left = tail_enclosure(seq, digits, n, MAX_DIGIT, T) + alpha
    right = tail_enclosure(seq, digits, n, MIN_DIGIT, T) + alpha
    return LevelInterval(prefix, left, right)


def level_count(seq: SequenceSpec, digits: DigitSetSpec, n: int, start: int = 0) -> mpz:
    """``prod_{start < k <= n} m_k``."""
    count = mpz(1)
    for k in range(start + 1, n + 1):
        count *= digit_count(digits, seq, k)
    return count


def build_level(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    n: int,
    T: int | None = None,
    prefix_filter: Sequence[int] = (),
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> list[LevelInterval]:
    """All level-``n`` intervals extending ``prefix_filter``, sorted by left endpoint.

    Raises :class:`BudgetExceededError` if more than ``budget`` intervals
    would be produced.
    """
    prefix_filter = validate_prefix(seq, digits, prefix_filter)
    if len(prefix_filter) > n:
        raise ValueError("prefix filter is longer than the level")
    count = level_count(seq, digits, n, len(prefix_filter))
    if count > budget:
        raise BudgetExceededError(count, budget)
    T = _depth(seq, n, T)

    alphas = [(prefix_filter, prefix_sum(seq, prefix_filter))]
    for k in range(len(prefix_filter) + 1, n + 1):
        a_k = term(seq, k)
        ds = digit_set(digits, seq, k)
        alphas = [(p + (d,), alpha + 1 / (a_k * d)) for p, alpha in alphas for d in ds]
    intervals = [_interval(seq, digits, p, alpha, T) for p, alpha in alphas]
    intervals.sort(key=lambda iv: (iv.left.lo, iv.right.hi))
    return intervals


def children(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    prefix: Sequence[int],
    T: int | None = None,
    child_digits: Iterable[int] | None = None,
) -> list[LevelInterval]:
    """Children of ``prefix`` in increasing digit order (so decreasing position).

    ``child_digits`` restricts the children to a subset of ``D_{n+1}``, which
    is the only practical option when ``m_{n+1}`` is astronomically large.
    """
    prefix = validate_prefix(seq, digits, prefix)
    n = len(prefix) + 1
    T = _depth(seq, n, T)
    ds = digit_set(digits, seq, n)
    chosen = ds if child_digits is None else sorted(mpz(d) for d in child_digits)
    alpha = prefix_sum(seq, prefix)
    a_n = term(seq, n)
    out = []
    for d in chosen:
        if d not in ds:
            raise ValidationError(f"digit {d} is not in D_{n}")
        out.append(_interval(seq, digits, prefix + (d,), alpha + 1 / (a_n * d), T))
    return out


def relation(lower: LevelInterval, upper: LevelInterval) -> str:
    """Relation of two intervals given in sorted (left to right) order."""
    if lower.right.hi < upper.left.lo:
        return SEPARATED
    if lower.right.lo > upper.left.hi:
        return OVERLAPPING
    return INDETERMINATE


def classify_adjacent(intervals: Sequence[LevelInterval]) -> list[str]:
    """``separated``/``indeterminate``/``overlapping`` for each adjacent sorted pair."""
    return [relation(a, b) for a, b in zip(intervals, intervals[1:])]


def point_from_digits(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    word: Sequence[int],
    tail_mode: str = MIN_DIGIT,
    T: int | None = None,
) -> Enclosure:
    """Enclosure of ``sum_n 1/(a_n d_n)`` for the infinite digit word made of
    ``word`` followed by all-min digits, all-max digits, or the last digit of
    ``word`` repeated forever (``"repeat-last"``)."""
    word = validate_prefix(seq, digits, word)
    n = len(word)
    T = _depth(seq, n, T)
    if tail_mode == REPEAT_LAST:
        if not word:
            raise ValidationError("repeat-last needs a nonempty word")
        d = word[-1]
        for k in range(n + 1, T + 2):
            if d not in digit_set(digits, seq, k):
                raise ValidationError(f"repeated digit {d} is not in D_{k}")
        mode = int(d)
    elif tail_mode in (MIN_DIGIT, MAX_DIGIT):
        mode = tail_mode
    else:
        raise ValidationError(f"unknown tail mode {tail_mode!r}")
    return tail_enclosure(seq, digits, n, mode, T) + prefix_sum(seq, word)


def write_intervals_csv(intervals: Iterable[LevelInterval], fh) -> None:
    """Rows ``level, prefix, left_lo, left_hi, right_lo, right_hi`` with exact fractions."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["level", "prefix", "left_lo", "left_hi", "right_lo", "right_hi"])
    for iv in intervals:
        writer.writerow(
            [
                iv.level,
                ".".join(str(d) for d in iv.prefix),
                rational_str(iv.left.lo),
                rational_str(iv.left.hi),
                rational_str(iv.right.lo),
                rational_str(iv.right.hi),
            ]
        )
