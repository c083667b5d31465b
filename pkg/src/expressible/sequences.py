"""Exact generators for the base sequences ``a_n`` and the digit sets ``D_n``.

All scalars are :class:`gmpy2.mpq` rationals or Python/gmpy2 integers.  A
sequence and a digit-set specification together describe the expressible set

    K(A, (D_n)) = { sum_n 1/(a_n d_n) : d_n in D_n }.

The doubly exponential families are parametrized by a ``base`` and a level
exponent ``e(n)``: ``a_n = base**e(n) * f(n)`` with ``(base, e(n)) = (2, N**n)``
or ``(N, 2**n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DepthExceededError, InconsistentSpecError, ValidationError

Rational = type(mpq(0))
RationalLike = Union[int, str, Fraction, "mpq"]

DEFAULT_DIGIT_BUDGET = 2_000_000
LOG10_2 = math.log10(2)

TWO_POW_N = "two-to-Nth-power"
N_POW_TWO = "N-to-2nth-power"
FILL_LARGEST = "largest"
FILL_EVEN = "even"


def as_rational(value) -> mpq:
    """Convert ints, ``"p/q"`` or decimal strings, and fractions to ``mpq``.

    Floats are rejected: they would smuggle rounding into exact code paths.
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, Rational):
        return value
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            f = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
        return mpq(f.numerator, f.denominator)
    raise ValidationError(f"not a rational: {value!r}")


def rational_str(x) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor_power(base: int, exponent, factor: int = 1) -> mpz:
    """Return ``floor(base**exponent * factor)`` exactly for rational ``exponent >= 0``."""
    exponent = as_rational(exponent)
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    p, q = int(exponent.numerator), int(exponent.denominator)
    radicand = mpz(base) ** p * mpz(factor) ** q
    if q == 1:
        return radicand
    root, _ = gmpy2.iroot(radicand, q)
    return root


def power_bounds(base: int, exponent, factor: int = 1) -> tuple[mpz, mpz]:
    """Integer bracket ``(floor, ceil)`` of ``base**exponent * factor``."""
    exponent = as_rational(exponent)
    p, q = int(exponent.numerator), int(exponent.denominator)
    radicand = mpz(base) ** p * mpz(factor) ** q
    root, exact = gmpy2.iroot(radicand, q)
    return root, root if exact else root + 1


# ---------------------------------------------------------------------------
# growth functions


@dataclass(frozen=True)
class GrowthFunction:
    """Positive integer valued function of the level ``n >= 1``.

    ``kind`` is ``"one"`` (constant 1), ``"table"`` (``data[n-1]``) or
    ``"poly"`` (``sum data[i] * n**i`` with nonnegative integer coefficients).
    """

    kind: str = "one"
    data: tuple = ()

    def __post_init__(self):
        if self.kind not in ("one", "table", "poly"):
            raise ValidationError(f"unknown growth function kind {self.kind!r}")
        data = tuple(int(v) for v in self.data)
        object.__setattr__(self, "data", data)
        if self.kind == "table" and (not data or min(data) < 1):
            raise ValidationError("table growth function needs positive entries")
        if self.kind == "poly":
            if not data or min(data) < 0 or sum(data) < 1:
                raise ValidationError(
                    "poly growth function needs nonnegative coefficients, not all zero"
                )

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("growth functions are defined for n >= 1")
        if self.kind == "one":
            return 1
        if self.kind == "table":
            if n > len(self.data):
                raise DepthExceededError(
                    f"growth table has {len(self.data)} entries, level {n} requested"
                )
            return self.data[n - 1]
        return sum(c * n**i for i, c in enumerate(self.data))

    @property
    def is_one(self) -> bool:
        return self.kind == "one" or (self.kind == "poly" and self.data[0] == 1 and not any(self.data[1:]))


ONE = GrowthFunction()


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class Geometric:
    """``a_n = b**n``."""

    b: mpq

    def __post_init__(self):
        b = as_rational(self.b)
        if b <= 1:
            raise ValidationError("geometric ratio b must exceed 1")
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class DoubleExpPow:
    """``a_n = 2**(N**n) * f(n)`` or ``a_n = N**(2**n) * f(n)``."""

    N: int
    form: str = TWO_POW_N
    f: GrowthFunction = ONE

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValidationError("N must be an integer >= 2")
        object.__setattr__(self, "N", int(self.N))
        if self.form not in (TWO_POW_N, N_POW_TWO):
            raise ValidationError(f"unknown base form {self.form!r}")

    @property
    def base(self) -> int:
        return 2 if self.form == TWO_POW_N else self.N

    def exponent(self, n: int) -> int:
        """Level exponent ``e(n)`` with ``a_n = base**e(n) * f(n)``."""
        return self.N**n if self.form == TWO_POW_N else 2**n


@dataclass(frozen=True)
class Recurrence:
    """Sylvester-type recurrence ``a_{n+1} = a_n**2 - a_n + 1``."""

    a1: int

    def __post_init__(self):
        if int(self.a1) != self.a1 or self.a1 < 2:
            raise ValidationError("a1 must be an integer >= 2")
        object.__setattr__(self, "a1", int(self.a1))


@dataclass(frozen=True)
class Explicit:
    """A finite, strictly increasing list of positive rational terms.

    The series stops after the last term: terms beyond the list are absent
    and contribute nothing to tails.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple(as_rational(t) for t in self.terms)
        if not terms:
            raise ValidationError("explicit sequence needs at least one term")
        if terms[0] <= 0 or any(b <= a for a, b in zip(terms, terms[1:])):
            raise ValidationError("explicit terms must be positive and strictly increasing")
        object.__setattr__(self, "terms", terms)


SequenceSpec = Union[Geometric, DoubleExpPow, Recurrence, Explicit]


_SYLVESTER: dict[int, list] = {}


def _estimated_digits(spec: SequenceSpec, n: int) -> float:
    if isinstance(spec, Geometric):
        bits = max(spec.b.numerator.bit_length(), spec.b.denominator.bit_length())
        return n * bits * LOG10_2
    if isinstance(spec, DoubleExpPow):
        e = spec.exponent(n)
        return e * math.log10(spec.base)
    return 0.0


def term(spec: SequenceSpec, n: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> mpq:
    """Exact ``a_n`` for ``n >= 1``.

    Raises :class:`DepthExceededError` when ``a_n`` would need more than
    ``digit_budget`` decimal digits.
    """
    return _term(spec, n, digit_budget)


@lru_cache(maxsize=1024)
def _term(spec: SequenceSpec, n: int, digit_budget: int) -> mpq:
    if n < 1:
        raise ValueError("terms are indexed from n = 1")
    if _estimated_digits(spec, n) > digit_budget:
        raise DepthExceededError(f"a_{n} exceeds the budget of {digit_budget} digits")
    if isinstance(spec, Geometric):
        return spec.b**n
    if isinstance(spec, DoubleExpPow):
        return mpq(mpz(spec.base) ** spec.exponent(n) * spec.f(n))
    if isinstance(spec, Recurrence):
        return mpq(_sylvester(spec.a1, n, digit_budget))
    if isinstance(spec, Explicit):
        if n > len(spec.terms):
            raise DepthExceededError(f"explicit sequence has only {len(spec.terms)} terms")
        return spec.terms[n - 1]
    raise TypeError(f"unsupported sequence spec {spec!r}")


def _sylvester(a1: int, n: int, digit_budget: int) -> mpz:
    terms = _SYLVESTER.setdefault(a1, [mpz(a1)])
    while len(terms) < n:
        a = terms[-1]
        # a**2 has at most twice the bits of a
        if 2 * a.bit_length() * LOG10_2 > digit_budget:
            raise DepthExceededError(f"a_{len(terms) + 1} exceeds the budget of {digit_budget} digits")
        terms.append(a * a - a + 1)
    value = terms[n - 1]
    if value.bit_length() * LOG10_2 > digit_budget:
        raise DepthExceededError(f"a_{n} exceeds the budget of {digit_budget} digits")
    return value


def sequence_length(spec: SequenceSpec) -> int | None:
    """Number of terms, or ``None`` for infinite sequences."""
    return len(spec.terms) if isinstance(spec, Explicit) else None


def has_doubling_certificate(spec: SequenceSpec, start: int = 1) -> bool:
    """Whether ``a_{k+1} >= 2 a_k`` holds for every ``k >= start``.

    Sylvester terms double once ``a_k >= 3``.  Doubly exponential terms
    double when ``f`` is nondecreasing; a tabulated ``f`` is checked step by
    step on its entries and assumed to keep that bound past the table.
    """
    if isinstance(spec, Recurrence):
        return spec.a1 >= 3 or start >= 2
    if isinstance(spec, DoubleExpPow):
        f = spec.f
        if f.kind != "table":
            return True
        base = mpz(spec.base)
        for k in range(max(start, 1), len(f.data)):
            jump = base ** (spec.exponent(k + 1) - spec.exponent(k))
            if jump * f(k + 1) < 2 * f(k):
                return False
        return True
    if isinstance(spec, Geometric):
        return spec.b >= 2
    return False


# ---------------------------------------------------------------------------
# digit sets


@dataclass(frozen=True)
class UniformRange:
    """``D_n = {1, ..., K}`` at every level."""

    K: int

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValidationError("K must be a positive integer")
        object.__setattr__(self, "K", int(self.K))


@dataclass(frozen=True)
class TheoremFamily:
    """Digit sets with ``m_n = floor(base**(s e(n)) g(n))`` digits below
    the cap ``base**(r e(n)) h(n)``.

    ``fill="largest"`` picks ``{1}`` plus the ``m_n - 1`` largest integers
    under the cap (the tightest packing); ``fill="even"`` spreads the digits
    evenly over ``[1, cap]``.
    """

    s: mpq
    r: mpq
    g: GrowthFunction = ONE
    h: GrowthFunction = ONE
    fill: str = FILL_LARGEST

    def __post_init__(self):
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "r", as_rational(self.r))
        if self.s <= 0 or self.r <= 0:
            raise ValidationError("s and r must be positive")
        if self.fill not in (FILL_LARGEST, FILL_EVEN):
            raise ValidationError(f"unknown fill rule {self.fill!r}")


@dataclass(frozen=True)
class ExplicitPerLevel:
    """Digit lists given level by level; the last list repeats beyond the end."""

    levels: tuple

    def __post_init__(self):
        levels = tuple(tuple(int(d) for d in lv) for lv in self.levels)
        if not levels:
            raise ValidationError("at least one level of digits is required")
        for lv in levels:
            if not lv or lv[0] != 1 or any(b <= a for a, b in zip(lv, lv[1:])):
                raise ValidationError(
                    f"digit list {list(lv)} must start at 1 and be strictly increasing"
                )
        object.__setattr__(self, "levels", levels)


DigitSetSpec = Union[UniformRange, TheoremFamily, ExplicitPerLevel]


class DigitSet(Sequence):
    """Sorted digits ``1 = d_1 < ... < d_m`` of one level.

    Stored as an explicit head followed by an optional contiguous block
    ``[run_start, run_stop]`` so that astronomically large sets (``m_n``
    with hundreds of digits) cost O(1) memory.
    """

    __slots__ = ("head", "run_start", "run_stop")

    def __init__(self, head: Sequence[int], run: tuple[int, int] | None = None):
        self.head = tuple(mpz(d) for d in head)
        if run is None:
            self.run_start, self.run_stop = mpz(1), mpz(0)
        else:
            self.run_start, self.run_stop = mpz(run[0]), mpz(run[1])
            if self.head and self.run_start <= self.head[-1]:
                raise ValueError("run must start above the head")

    @property
    def count(self) -> mpz:
        return len(self.head) + max(mpz(0), self.run_stop - self.run_start + 1)

    def __len__(self) -> int:
        return int(self.count)

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[i] for i in range(*j.indices(len(self)))]
        if j < 0:
            j += self.count
        if not 0 <= j < self.count:
            raise IndexError(j)
        if j < len(self.head):
            return self.head[j]
        return self.run_start + (j - len(self.head))

    def __iter__(self) -> Iterator[mpz]:
        yield from self.head
        d = self.run_start
        while d <= self.run_stop:
            yield d
            d += 1

    def __contains__(self, d) -> bool:
        return d in self.head or self.run_start <= d <= self.run_stop

    def __eq__(self, other):
        if isinstance(other, DigitSet):
            return self.count == other.count and list(self) == list(other)
        if isinstance(other, (list, tuple)):
            return self.count == len(other) and all(a == b for a, b in zip(self, other))
        return NotImplemented

    def __repr__(self):
        if self.count <= 12:
            return f"DigitSet({[int(d) for d in self]})"
        return f"DigitSet(count={self.count}, min={self.min}, max={self.max})"

    def between(self, lo, hi) -> Iterator[mpz]:
        """Digits ``d`` with ``lo <= d <= hi`` in increasing order."""
        for d in self.head:
            if lo <= d <= hi:
                yield d
        d, stop = max(self.run_start, mpz(lo)), min(self.run_stop, mpz(hi))
        while d <= stop:
            yield d
            d += 1

    @property
    def min(self) -> mpz:
        return self[0]

    @property
    def max(self) -> mpz:
        return self[-1]

    def min_reciprocal_gap(self) -> mpq:
        """``min (1/x - 1/y)`` over consecutive digits ``x < y``.

        Inside the contiguous block ``1/d - 1/(d+1)`` decreases in ``d``, so
        only its top pair, the head pairs and the junction are candidates.
        """
        if self.count < 2:
            raise ValueError("need at least two digits")
        best = None
        pairs = list(zip(self.head, self.head[1:]))
        if self.run_stop >= self.run_start:
            if self.head:
                pairs.append((self.head[-1], self.run_start))
            if self.run_stop > self.run_start:
                pairs.append((self.run_stop - 1, self.run_stop))
        for x, y in pairs:
            gap = mpq(1, x) - mpq(1, y)
            if best is None or gap < best:
                best = gap
        return best


def level_base_exponent(seq: SequenceSpec, n: int) -> tuple[int, int]:
    """``(base, e(n))`` for a doubly exponential sequence."""
    if not isinstance(seq, DoubleExpPow):
        raise InconsistentSpecError(
            "theorem-family digit sets need a doubly exponential base sequence"
        )
    return seq.base, seq.exponent(n)


def digit_count(spec: DigitSetSpec, seq: SequenceSpec, n: int) -> mpz:
    """``m_n`` without building the set."""
    if isinstance(spec, UniformRange):
        return mpz(spec.K)
    if isinstance(spec, ExplicitPerLevel):
        return mpz(len(_explicit_level(spec, n)))
    base, e = level_base_exponent(seq, n)
    return floor_power(base, spec.s * e, spec.g(n))


def digit_cap(spec: DigitSetSpec, seq: SequenceSpec, n: int) -> mpz:
    """Largest admissible digit at level ``n``."""
    if isinstance(spec, UniformRange):
        return mpz(spec.K)
    if isinstance(spec, ExplicitPerLevel):
        return mpz(_explicit_level(spec, n)[-1])
    base, e = level_base_exponent(seq, n)
    return floor_power(base, spec.r * e, spec.h(n))


def _explicit_level(spec: ExplicitPerLevel, n: int) -> tuple:
    return spec.levels[min(n, len(spec.levels)) - 1]


@lru_cache(maxsize=4096)
def digit_set(spec: DigitSetSpec, seq: SequenceSpec, n: int) -> DigitSet:
    """The digit set ``D_n``.

    Raises :class:`InconsistentSpecError` when ``m_n`` digits do not fit
    under the cap.
    """
    if n < 1:
        raise ValueError("digit sets are indexed from n = 1")
    if isinstance(spec, UniformRange):
        return DigitSet((), (1, spec.K))
    if isinstance(spec, ExplicitPerLevel):
        return DigitSet(_explicit_level(spec, n))
    m = digit_count(spec, seq, n)
    cap = digit_cap(spec, seq, n)
    if m < 1:
        raise InconsistentSpecError(f"m_{n} = {m} < 1")
    if m > cap:
        raise InconsistentSpecError(f"m_{n} = {m} digits do not fit under the cap {cap}")
    if m == 1:
        return DigitSet((1,))
    if spec.fill == FILL_LARGEST:
        return DigitSet((1,), (cap - m + 2, cap))
    # evenly spaced: materialized, so guard the size
    if m > 10**6:
        raise InconsistentSpecError(f"evenly spaced digit set with {m} digits is too large")
    c, k = cap - 1, m - 1
    return DigitSet([1 + (j * c) // k for j in range(m)])


# ---------------------------------------------------------------------------
# theorem families and validation


THEOREMS = ("thm1", "thm2", "thm3", "none")


@dataclass(frozen=True)
class Family:
    """A sequence, a digit-set rule and the theorem they are meant to satisfy."""

    theorem: str
    sequence: SequenceSpec
    digits: DigitSetSpec
    eta: mpq | None = None

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValidationError(f"unknown theorem {self.theorem!r}")
        if self.eta is not None:
            object.__setattr__(self, "eta", as_rational(self.eta))


def thm1_family(b, K: int) -> Family:
    return Family("thm1", Geometric(as_rational(b)), UniformRange(K))


def thm2_family(N: int, s, r, f=ONE, g=ONE, h=ONE, fill=FILL_LARGEST) -> Family:
    return Family(
        "thm2", DoubleExpPow(N, TWO_POW_N, f), TheoremFamily(as_rational(s), as_rational(r), g, h, fill)
    )


def thm3_family(N: int, s, r, eta, f=ONE, g=ONE, h=ONE, fill=FILL_LARGEST) -> Family:
    return Family(
        "thm3",
        DoubleExpPow(N, N_POW_TWO, f),
        TheoremFamily(as_rational(s), as_rational(r), g, h, fill),
        as_rational(eta),
    )


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    theorem: str
    checks: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _le_root_power(x: int, exponent_num: int, exponent_den: int, base: int, cap_num: int, cap_den: int) -> bool:
    """Exact test of ``x**(den/num) <= base**(cap_num/cap_den)``, i.e.
    ``x**(1/t) <= base**c`` with ``t = num/den`` and ``c = cap_num/cap_den``.
    """
    # x**(1/t) <= B**c  <=>  x <= B**(c t)  <=>  x**(den*cap_den) <= B**(cap_num*num)
    return mpz(x) ** (exponent_den * cap_den) <= mpz(base) ** (cap_num * exponent_num)


def validate_spec(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    theorem: str,
    eta=None,
    levels: range = range(1, 7),
) -> ValidationReport:
    """Check every hypothesis of ``theorem`` and report each truth value.

    Hypotheses involving functions of ``n`` are checked on ``levels`` only.
    Nothing is raised for failing hypotheses.
    """
    checks: list[Check] = []
    add = lambda name, ok, detail="": checks.append(Check(name, bool(ok), detail))  # noqa: E731

    if theorem not in THEOREMS:
        raise ValidationError(f"unknown theorem {theorem!r}")

    if theorem == "none":
        return ValidationReport(theorem, ())

    if theorem == "thm1":
        geo = isinstance(seq, Geometric)
        uni = isinstance(digits, UniformRange)
        add("sequence is geometric a_n = b^n", geo)
        add("digits are {1..K}", uni)
        if geo:
            add("b > 4", seq.b > 4)
        if geo and uni:
            add("K^2 < b", digits.K**2 < seq.b)
        return ValidationReport(theorem, tuple(checks))

    form = TWO_POW_N if theorem == "thm2" else N_POW_TWO
    dexp = isinstance(seq, DoubleExpPow) and seq.form == form
    fam = isinstance(digits, TheoremFamily)
    add(f"sequence is {form} times f(n)", dexp)
    add("digits follow the theorem family rule", fam)
    if not (dexp and fam):
        return ValidationReport(theorem, tuple(checks))

    N, s, r = seq.N, digits.s, digits.r
    add("0 < s", s > 0)
    add("s <= r", s <= r)
    if theorem == "thm2":
        add("r < (N-1)/2", r < mpq(N - 1, 2))
    else:
        add("r < 1/2", r < mpq(1, 2))
        if eta is None:
            add("0 < eta < 1", False, "eta missing")
            return ValidationReport(theorem, tuple(checks))
        eta = as_rational(eta)
        add("0 < eta < 1", 0 < eta < 1)
        if not 0 < eta < 1:
            return ValidationReport(theorem, tuple(checks))

    base = seq.base
    bad = {"f": [], "g": [], "h": [], "cross": []}
    for n in levels:
        # cap exponent c(n) with cap = base**c(n)
        if theorem == "thm2":
            c = mpq((N - 1) ** n)
        else:
            c = (2 - eta) ** n
        cn, cd = int(c.numerator), int(c.denominator)
        fn, gn, hn = seq.f(n), digits.g(n), digits.h(n)
        if not (fn >= 1 and _le_root_power(fn, 1, 1, base, cn, cd)):
            bad["f"].append(n)
        if not (gn >= 1 and _le_root_power(gn, int(s.numerator), int(s.denominator), base, cn, cd)):
            bad["g"].append(n)
        if not (hn >= 1 and _le_root_power(hn, int(r.numerator), int(r.denominator), base, cn, cd)):
            bad["h"].append(n)
        e = seq.exponent(n)
        den = int(gmpy2.lcm(s.denominator, r.denominator))
        a, b = int(s * den), int(r * den)
        if mpz(base) ** (a * e) * mpz(gn) ** den > mpz(base) ** (b * e) * mpz(hn) ** den:
            bad["cross"].append(n)

    cap_txt = "2^((N-1)^n)" if theorem == "thm2" else "N^((2-eta)^n)"
    scope = f"n in {levels.start}..{levels.stop - 1}"
    for key, label in (("f", "f(n)"), ("g", "g(n)^(1/s)"), ("h", "h(n)^(1/r)")):
        add(f"1 <= {label} <= {cap_txt}", not bad[key], f"{scope}; fails at {bad[key]}" if bad[key] else scope)
    cross = "2^(s N^n) g(n) <= 2^(r N^n) h(n)" if theorem == "thm2" else "N^(s 2^n) g(n) <= N^(r 2^n) h(n)"
    add(cross, not bad["cross"], f"{scope}; fails at {bad['cross']}" if bad["cross"] else scope)
    return ValidationReport(theorem, tuple(checks))


def validate_family(family: Family, levels: range = range(1, 7)) -> ValidationReport:
    return validate_spec(family.sequence, family.digits, family.theorem, family.eta, levels)
