"""Number-theoretic side experiments: decoding points back to digit words,
the Sylvester telescoping identity, the growth constant ``a_n^(1/2^n)`` and
a rational-approximation exponent probe.

The exponent probe is exploratory.  Finitely many convergents never decide
whether a number is a Liouville number.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

import gmpy2
from gmpy2 import mpq, mpz

from .cantor import SEPARATED, _interval, relation
from .enclosure import MAX_DIGIT, MIN_DIGIT, Enclosure, default_tail_depth, tail_enclosure
from .errors import DepthExceededError, ValidationError
from .logs import bits_for_digits, ln_enclosure
from .sequences import DEFAULT_DIGIT_BUDGET, Recurrence, digit_set, term

UNIQUE = "unique"
AMBIGUOUS = "ambiguous"
OUTSIDE = "outside"
PRECISION_EXHAUSTED = "precision-exhausted"
COMPLETE = "complete"

CANDIDATE_LIMIT = 64


@dataclass(frozen=True)
class DecodeResult:
    digits: tuple
    status: str
    level: int | None = None

    def to_dict(self) -> dict:
        return {"digits": [int(d) for d in self.digits], "status": self.status, "level": self.level}


def _ceil_div(x: mpq) -> mpz:
    return -((-x.numerator) // x.denominator)


def decode_digits(x: Enclosure, seq, digits, depth: int, T: int | None = None) -> DecodeResult:
    """Recover the digit word of a point of the set by interval membership.

    At each level the children of the current prefix whose enclosures could
    contain ``x`` are collected.  One candidate advances; none means ``x``
    lies outside the set at that level; several are reported as
    ``ambiguous`` when their intervals overlap and ``precision-exhausted``
    when they are separated but ``x`` is too wide to choose.
    """
    if x.lo <= 0:
        raise ValidationError("x must be positive")
    prefix: tuple = ()
    alpha = mpq(0)
    for k in range(1, depth + 1):
        Tk = default_tail_depth(seq, k) if T is None else T
        if Tk < k + 1:
            raise ValidationError(f"tail depth T={Tk} is too small for level {k}")
        a_k = term(seq, k)
        tmin = tail_enclosure(seq, digits, k, MIN_DIGIT, Tk)
        tmax = tail_enclosure(seq, digits, k, MAX_DIGIT, Tk)
        # child d may contain x iff L <= 1/(a_k d) <= U
        upper = x.hi - alpha - tmax.lo
        lower = x.lo - alpha - tmin.hi
        if upper <= 0:
            return DecodeResult(prefix, OUTSIDE, k)
        ds = digit_set(digits, seq, k)
        d_lo = _ceil_div(1 / (a_k * upper))
        d_hi = ds.max if lower <= 0 else (1 / (a_k * lower)).numerator // (1 / (a_k * lower)).denominator
        cands = list(islice(ds.between(d_lo, d_hi), CANDIDATE_LIMIT + 1))
        kids = [_interval(seq, digits, prefix + (d,), alpha + 1 / (a_k * d), Tk) for d in cands]
        kids = [iv for iv in kids if iv.may_contain(x)]
        if not kids:
            return DecodeResult(prefix, OUTSIDE, k)
        if len(kids) > 1:
            ordered = sorted(kids, key=lambda iv: iv.left.lo)
            rels = {relation(a, b) for a, b in zip(ordered, ordered[1:])}
            if rels == {SEPARATED}:
                return DecodeResult(prefix, PRECISION_EXHAUSTED, k)
            return DecodeResult(prefix, AMBIGUOUS, k)
        d = kids[0].prefix[-1]
        prefix += (d,)
        alpha += 1 / (a_k * d)
    return DecodeResult(prefix, UNIQUE)


# ---------------------------------------------------------------------------
# Sylvester recurrence


@dataclass(frozen=True)
class TelescopingResult:
    a1: int
    n: int
    partial_sum: mpq
    tail: mpq
    residual: mpq


def telescoping_check(a1: int, n: int) -> TelescopingResult:
    """Finite form of ``sum 1/a_k = 1/(a_1 - 1)`` for ``a_{k+1} = a_k^2 - a_k + 1``.

    ``residual = 1/(a_1-1) - sum_{k<=n} 1/a_k - 1/(a_{n+1}-1)`` is exactly zero;
    ``tail = 1/(a_{n+1}-1)`` is the gap between the partial sum and the limit.
    """
    seq = Recurrence(a1)
    partial = mpq(0)
    for k in range(1, n + 1):
        partial += 1 / term(seq, k)
    tail = 1 / (term(seq, n + 1) - 1)
    residual = mpq(1, a1 - 1) - partial - tail
    return TelescopingResult(a1, n, partial, tail, residual)


def growth_limit_sequence(
    a1: int,
    n_max: int,
    precision: int = 50,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> list[tuple[int, Enclosure]]:
    """Enclosures of ``a_n^(1/2^n)`` for ``n = 1..n_max``, each of width ``<= 10^-precision``.

    Roots are taken by integer root extraction on ``a_n * 10^(precision 2^n)``,
    so the lower end is rounded down and the upper end up.
    """
    seq = Recurrence(a1)
    scale = mpz(10) ** precision
    out = []
    for n in range(1, n_max + 1):
        r = 2**n
        if precision * r > digit_budget:
            raise DepthExceededError(f"root of a_{n} at {precision} digits exceeds the digit budget")
        a = mpz(term(seq, n, digit_budget))
        root, exact = gmpy2.iroot(a * scale**r, r)
        lo = mpq(root, scale)
        out.append((n, Enclosure(lo, lo if exact else mpq(root + 1, scale))))
    return out


# ---------------------------------------------------------------------------
# continued fractions and approximation exponents


def continued_fraction(x) -> list[mpz]:
    """Partial quotients of a rational number (finite expansion)."""
    x = mpq(x)
    p, q = x.numerator, x.denominator
    out = []
    while q:
        a = p // q
        out.append(a)
        p, q = q, p - a * q
    return out


def convergents(quotients) -> list[tuple[mpz, mpz]]:
    """Convergents ``(p_k, q_k)`` of ``[a_0; a_1, a_2, ...]``."""
    p0, q0, p1, q1 = mpz(1), mpz(0), mpz(quotients[0]) if quotients else mpz(0), mpz(1)
    if not quotients:
        return []
    out = [(p1, q1)]
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


@dataclass(frozen=True)
class ProbeRow:
    p: mpz
    q: mpz
    distance: Enclosure
    exponent: Enclosure | None
    unbounded: bool = False


@dataclass(frozen=True)
class ProbeResult:
    rows: tuple
    status: str
    label: str = "exploratory"

    def to_list(self, digits: int = 12) -> list[dict]:
        out = []
        for row in self.rows:
            w = None
            if row.exponent is not None:
                value, err = row.exponent.decimal_pair(digits)
                w = {"value": value, "error": err}
            out.append(
                {"p": str(row.p), "q": str(row.q), "exponent": w, "unbounded": row.unbounded}
            )
        return out


def exponent_probe(x: Enclosure, q_max: int, precision: int = 30) -> ProbeResult:
    """Convergents ``p/q`` of ``x`` with ``q <= q_max`` and the effective exponent
    ``w = -log|x - p/q| / log q`` as an enclosure over all points of ``x``.

    Only partial quotients shared by every point of ``x`` are used.  The
    status is ``precision-exhausted`` when those run out before ``q_max``.
    """
    lo_cf, hi_cf = continued_fraction(x.lo), continued_fraction(x.hi)
    if x.is_exact:
        quotients, complete = lo_cf, True
    else:
        shared = 0
        while shared < min(len(lo_cf), len(hi_cf)) and lo_cf[shared] == hi_cf[shared]:
            shared += 1
        # the last shared quotient may still differ for interior points
        quotients, complete = lo_cf[: max(shared - 1, 0)], False
    bits = bits_for_digits(precision)
    rows = []
    for p, q in convergents(quotients):
        if q > q_max:
            complete = True
            break
        c = mpq(p, q)
        far = max(abs(x.lo - c), abs(x.hi - c))
        near = mpq(0) if x.lo <= c <= x.hi else min(abs(x.lo - c), abs(x.hi - c))
        dist = Enclosure(near, far)
        if q == 1 or far == 0:
            rows.append(ProbeRow(p, q, dist, None, unbounded=far == 0))
            continue
        lnq = ln_enclosure(q, bits)
        if near == 0:
            rows.append(ProbeRow(p, q, dist, None, unbounded=True))
            continue
        w = -Enclosure(ln_enclosure(near, bits).lo, ln_enclosure(far, bits).hi) / lnq
        rows.append(ProbeRow(p, q, dist, w))
    return ProbeResult(tuple(rows), COMPLETE if complete else PRECISION_EXHAUSTED)
