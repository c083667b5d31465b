"""Certified rational enclosures and the tail sums of the constructions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq, mpz

from .errors import DegenerateDigitSetError, DepthExceededError
from .sequences import (
    DigitSetSpec,
    Explicit,
    Geometric,
    SequenceSpec,
    UniformRange,
    as_rational,
    digit_set,
    has_doubling_certificate,
    sequence_length,
    term,
)

MIN_DIGIT = "min"
MAX_DIGIT = "max"


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval ``[lo, hi]`` certified to contain a real value."""

    lo: mpq
    hi: mpq

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def exact(cls, value) -> "Enclosure":
        value = as_rational(value)
        return cls(value, value)

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def midpoint(self) -> mpq:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> mpq:
        return (self.hi - self.lo) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def _coerce(self, other):
        if isinstance(other, Enclosure):
            return other
        return Enclosure.exact(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self * Enclosure(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        return f"Enclosure({self.render(12)})"

    def render(self, digits: int = 30) -> str:
        """Decimal text showing only the digits shared by ``lo`` and ``hi``.

        The shared prefix is followed by an explicit ``±`` bound that covers
        the whole enclosure.
        """
        if self.is_exact and self.lo.denominator == 1:
            return str(self.lo.numerator)
        shown, places = _agreeing_prefix(self.lo, self.hi, digits)
        err = max(abs(self.hi - shown), abs(self.lo - shown))
        return f"{_fixed(shown, places)} ± {_sci_up(err)}"

    def decimal_pair(self, digits: int = 50) -> tuple[str, str]:
        """``(value, error)`` strings: midpoint rounded to ``digits`` places and
        an upward-rounded bound on the distance to every point of the enclosure."""
        scale = mpz(10) ** digits
        mid = self.midpoint
        q = mpq(_round_half_even(mid * scale), scale)
        err = max(abs(self.hi - q), abs(self.lo - q))
        return _fixed(q, digits), _sci_up(err)


def _round_half_even(x: mpq) -> mpz:
    fl = x.numerator // x.denominator
    rem = x - fl
    if rem > mpq(1, 2) or (rem == mpq(1, 2) and fl % 2):
        return fl + 1
    return mpz(fl)


def _fixed(x: mpq, places: int) -> str:
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = (x * mpz(10) ** places).numerator // (x * mpz(10) ** places).denominator
    s = str(scaled).rjust(places + 1, "0")
    if places == 0:
        return sign + s
    return f"{sign}{s[:-places]}.{s[-places:]}"


def _sci_up(err: mpq) -> str:
    """Upward-rounded two-significant-digit scientific rendering of ``err >= 0``."""
    if err == 0:
        return "0"
    # find e with 10**e <= err < 10**(e+1)
    e = len(str(err.numerator)) - len(str(err.denominator))
    while mpq(10) ** e > err:
        e -= 1
    while mpq(10) ** (e + 1) <= err:
        e += 1
    mant = err / mpq(10) ** (e - 1)
    m = mant.numerator // mant.denominator
    if m * mant.denominator != mant.numerator:
        m += 1
    if m >= 100:
        m, e = (m + 9) // 10, e + 1
    return f"{m // 10}.{m % 10}e{e:+03d}"


def _agreeing_prefix(lo: mpq, hi: mpq, max_places: int) -> tuple[mpq, int]:
    """Longest decimal truncation (toward minus infinity) shared by lo and hi."""
    shown, places = mpq(lo.numerator // lo.denominator), 0
    if hi.numerator // hi.denominator != shown:
        return shown, 0
    for k in range(1, max_places + 1):
        scale = mpz(10) ** k
        a = (lo * scale).numerator // (lo * scale).denominator
        b = (hi * scale).numerator // (hi * scale).denominator
        if a != b:
            break
        shown, places = mpq(a, scale), k
    return shown, places


# ---------------------------------------------------------------------------
# tails


def default_tail_depth(seq: SequenceSpec, after_level: int) -> int:
    """Absolute truncation depth ``T`` used when callers do not choose one."""
    if isinstance(seq, Geometric):
        return after_level + 40
    if isinstance(seq, Explicit):
        return max(len(seq.terms), after_level + 1)
    return after_level + 6


def _level_digit(digits: DigitSetSpec, seq: SequenceSpec, k: int, mode) -> mpz:
    if not isinstance(mode, str):
        return mpz(mode)
    ds = digit_set(digits, seq, k)
    if ds.count == 0:
        raise ValueError(f"digit set at level {k} is empty")
    return ds.min if mode == MIN_DIGIT else ds.max


def tail_enclosure(
    seq: SequenceSpec,
    digits: DigitSetSpec,
    after_level: int,
    digit_mode=MIN_DIGIT,
    T: int | None = None,
) -> Enclosure:
    """Enclosure of ``sum_{k > after_level} 1/(a_k d_k)`` where every ``d_k`` is
    the smallest (``"min"``) or largest (``"max"``) digit of ``D_k``, or a
    fixed positive integer passed as ``digit_mode``.

    ``T`` is the absolute depth of the exact partial sum; the remainder past
    ``T`` is bounded by ``2/a_{T+1}`` under the doubling certificate
    ``a_{k+1} >= 2 a_k`` (or the exact geometric remainder for ``a_k = b^k``).
    Geometric sequences with uniform digits use the closed form and ignore ``T``.
    """
    if isinstance(digit_mode, str):
        if digit_mode not in (MIN_DIGIT, MAX_DIGIT):
            raise ValueError(f"invalid digit mode {digit_mode!r}")
    elif int(digit_mode) < 1:
        raise ValueError(f"invalid constant digit {digit_mode!r}")
    else:
        digit_mode = int(digit_mode)
    if after_level < 0:
        raise ValueError("after_level must be >= 0")
    if T is None:
        T = default_tail_depth(seq, after_level)
    return _tail(seq, digits, after_level, digit_mode, T)


@lru_cache(maxsize=8192)
def _tail(seq, digits, n, mode, T) -> Enclosure:
    if isinstance(seq, Geometric) and isinstance(digits, UniformRange):
        d = {MIN_DIGIT: 1, MAX_DIGIT: digits.K}.get(mode, mode)
        return Enclosure.exact(1 / (d * seq.b**n * (seq.b - 1)))

    length = sequence_length(seq)
    if length is not None:
        total = mpq(0)
        for k in range(n + 1, length + 1):
            total += 1 / (term(seq, k) * _level_digit(digits, seq, k, mode))
        return Enclosure.exact(total)

    if T < n:
        raise ValueError(f"truncation depth T={T} is below the level {n}")
    partial = mpq(0)
    for k in range(n + 1, T + 1):
        partial += 1 / (term(seq, k) * _level_digit(digits, seq, k, mode))
    if isinstance(seq, Geometric):
        remainder = 1 / (seq.b**T * (seq.b - 1))
    elif has_doubling_certificate(seq, T + 1):
        remainder = 2 / term(seq, T + 1)
    else:
        raise DepthExceededError(f"no certified tail bound for {seq!r}")
    return Enclosure(partial, partial + remainder)


def full_tail_enclosure(seq: SequenceSpec, digits: DigitSetSpec, after_level: int, T: int | None = None) -> Enclosure:
    """Enclosure of ``sum_{k > after_level} 1/a_k`` (every digit equal to 1)."""
    return tail_enclosure(seq, digits, after_level, MIN_DIGIT, T)


def min_term_gap(seq: SequenceSpec, digits: DigitSetSpec, n: int) -> mpq:
    """Exact ``min_{x != y in D_n} |1/(x a_n) - 1/(y a_n)|``.

    Because ``1/x`` is decreasing the minimum is attained on consecutive digits.
    """
    ds = digit_set(digits, seq, n)
    if ds.count < 2:
        raise DegenerateDigitSetError(f"D_{n} has {ds.count} digit(s)")
    return ds.min_reciprocal_gap() / term(seq, n)
