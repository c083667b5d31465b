"""Dimension lower bounds from the Cantor-set ratio, and box-counting estimates.

For a generalized Cantor set whose level-``n`` intervals split into ``m_n``
pieces separated by gaps of at least ``eps_n``, the Hausdorff dimension is
bounded below by ``limsup log(m_1...m_n) / -log(m_{n+1} eps_{n+1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq, mpz

from .cantor import DEFAULT_ENUMERATION_BUDGET, build_level
from .enclosure import Enclosure
from .errors import HypothesisViolationError, InsufficientDataError, NotApplicableError, NotFoundError
from .gaps import Verdict, epsilon_n, find_n0, gap_report_for_level
from .logs import bits_for_digits, ln_enclosure
from .sequences import Family, as_rational, digit_count, rational_str, term


def bf_ratio(counts: Sequence[int], gap_bound, precision: int = 50) -> Enclosure:
    """Enclosure of ``log(m_1...m_n) / -log(m_{n+1} eps_{n+1})``.

    ``counts`` holds ``m_1, ..., m_{n+1}`` and ``gap_bound`` is ``eps_{n+1}``.
    Logarithms are certified to about ``precision`` decimal digits.
    """
    if len(counts) < 1:
        raise ValueError("need at least m_{n+1}")
    if any(m < 1 for m in counts):
        raise ValueError("all counts must be >= 1")
    gap_bound = as_rational(gap_bound)
    last = mpz(counts[-1]) * gap_bound
    if gap_bound <= 0 or last >= 1:
        raise NotApplicableError("m_{n+1} eps_{n+1} must lie in (0, 1)")
    product = mpz(1)
    for m in counts[:-1]:
        product *= m
    bits = bits_for_digits(precision)
    return ln_enclosure(product, bits) / -ln_enclosure(last, bits)


def closed_form_limit(family: Family, precision: int = 50) -> Enclosure:
    """``log K / log b``, ``s/((N-1)(N-s))`` or ``s/(2-s)``; exact for the latter two."""
    seq, digits = family.sequence, family.digits
    if family.theorem == "thm1":
        bits = bits_for_digits(precision)
        return ln_enclosure(digits.K, bits) / ln_enclosure(seq.b, bits)
    if family.theorem == "thm2":
        s, N = digits.s, seq.N
        return Enclosure.exact(s / ((N - 1) * (N - s)))
    if family.theorem == "thm3":
        s = digits.s
        return Enclosure.exact(s / (2 - s))
    raise ValueError("no closed-form bound for theorem 'none'")


def _ln(x, bits):
    return ln_enclosure(x, bits)


def simplified_ratio(family: Family, n: int, epsilon=1, precision: int = 50) -> Enclosure | None:
    """The proofs' simplified quotient aligned with :func:`bf_ratio` at level ``n``.

    For the doubly exponential families the proofs bound
    ``log(m_1...m_{k-1}) / -log(eps_k m_k)`` from below at ``k = n + 1``;
    for the geometric family the proof's quotient ``log(K^n) / -log(K eps_n)``
    is returned.  ``None`` when the denominator is not positive.
    """
    epsilon = as_rational(epsilon)
    bits = bits_for_digits(precision)
    seq, digits = family.sequence, family.digits
    ln2 = _ln(2, bits)
    if family.theorem == "thm1":
        b, K = seq.b, digits.K
        inner = mpq(1, K + 1) + (1 - K) / (b - 1)
        if inner <= 0:
            return None
        num = _ln(K, bits) * n
        den = _ln(b, bits) * n - _ln(inner, bits)
    elif family.theorem == "thm2":
        s, N, m = digits.s, seq.N, n + 1
        num = ln2 * (s * mpq(N**m - N, N - 1) - (m - 1))
        den = -_ln(epsilon / 2, bits) + ln2 * ((N - s) * N**m + (N - 1) ** (m + 1))
    elif family.theorem == "thm3":
        s, N, m = digits.s, seq.N, n + 1
        lnN = _ln(N, bits)
        num = lnN * (s * 2**m) - lnN * (2 * s) - ln2 * (m - 1)
        den = -_ln(epsilon / 2, bits) + lnN * ((2 - s) * 2**m)
    else:
        raise ValueError("no simplified quotient for theorem 'none'")
    if den.lo <= 0:
        return None
    return num / den


def _power_ge(x: mpq, base: int, exponent) -> bool:
    """Exact ``x >= base**exponent`` for ``x > 0`` and rational ``exponent``."""
    exponent = as_rational(exponent)
    u, v = exponent.numerator, exponent.denominator
    lhs = as_rational(x) ** int(v)
    if u >= 0:
        return lhs >= mpz(base) ** u
    return lhs * mpz(base) ** (-u) >= 1


def proof_bound_checks(family: Family, n: int, epsilon=1) -> dict[str, bool]:
    """Exact checks of the count and gap-times-count lower bounds used in the proofs.

    For thm2: ``m_1...m_{n-1} >= 2^(s(N^n-N)/(N-1) - (n-1))`` and
    ``eps_n m_n >= (eps/2) 2^-((N-s)N^n + (N-1)^(n+1))``.
    For thm3: ``m_1...m_{n-1} >= 2^-(n-1) N^(s(2^n-2))`` and
    ``eps_n m_n >= (eps/2) N^-((2-s)2^n)``.
    """
    epsilon = as_rational(epsilon)
    seq, digits = family.sequence, family.digits
    s, N = digits.s, seq.N
    product = mpz(1)
    for k in range(1, n):
        product *= digit_count(digits, seq, k)
    em = epsilon_n(family, n, epsilon) * digit_count(digits, seq, n)
    scaled = 2 * em / epsilon
    if family.theorem == "thm2":
        count_ok = _power_ge(mpq(product), 2, s * mpq(N**n - N, N - 1) - (n - 1))
        gap_ok = _power_ge(scaled, 2, -((N - s) * N**n + (N - 1) ** (n + 1)))
    elif family.theorem == "thm3":
        count_ok = _power_ge(mpq(product * 2 ** (n - 1)), N, s * (2**n - 2))
        gap_ok = _power_ge(scaled, N, -((2 - s) * 2**n))
    else:
        raise ValueError("proof bounds exist for thm2 and thm3 only")
    return {"count_lower_bound": bool(count_ok), "gap_count_lower_bound": bool(gap_ok)}


@dataclass(frozen=True)
class FiniteRatio:
    n: int
    ratio: Enclosure | None
    simplified: Enclosure | None
    note: str = ""


@dataclass(frozen=True)
class DimensionReport:
    family: Family
    finite_ratios: tuple
    closed_form_limit: Enclosure
    epsilon: mpq
    n0: int | None = None
    gap_levels_checked: tuple = ()
    boxcount: "BoxCountFit | None" = None
    notes: tuple = field(default_factory=tuple)

    @property
    def levels_used(self) -> range:
        ns = [fr.n for fr in self.finite_ratios]
        return range(min(ns), max(ns) + 1) if ns else range(0)

    @property
    def max_ratio(self) -> Enclosure | None:
        vals = [fr.ratio for fr in self.finite_ratios if fr.ratio is not None]
        return max(vals, key=lambda e: e.lo) if vals else None

    @property
    def trend(self) -> str:
        """Whether ``|ratio(n) - limit|`` shrinks monotonically over the computed range."""
        lim = self.closed_form_limit.midpoint
        devs = [abs(fr.ratio.midpoint - lim) for fr in self.finite_ratios if fr.ratio is not None]
        if len(devs) < 2:
            return "insufficient"
        if all(b <= a for a, b in zip(devs, devs[1:])):
            return "converging"
        if all(b >= a for a, b in zip(devs, devs[1:])):
            return "diverging"
        return "mixed"

    def ratio_at(self, n: int) -> Enclosure | None:
        for fr in self.finite_ratios:
            if fr.n == n:
                return fr.ratio
        raise KeyError(n)

    def to_dict(self, digits: int = 50) -> dict:
        def pair(enc):
            if enc is None:
                return None
            value, err = enc.decimal_pair(digits)
            return {"value": value, "error": err}

        lim = self.closed_form_limit
        return {
            "theorem": self.family.theorem,
            "epsilon": rational_str(self.epsilon),
            "n0": self.n0,
            "closed_form_limit": {
                "exact": rational_str(lim.lo) if lim.is_exact else None,
                **pair(lim),
            },
            "levels_used": [self.levels_used.start, self.levels_used.stop - 1] if self.finite_ratios else [],
            "trend": self.trend,
            "finite_ratios": [
                {"n": fr.n, "ratio": pair(fr.ratio), "simplified_ratio": pair(fr.simplified), "note": fr.note}
                for fr in self.finite_ratios
            ],
            "gap_levels_checked": list(self.gap_levels_checked),
            "boxcount": None if self.boxcount is None else self.boxcount.to_dict(),
            "notes": list(self.notes),
        }


def family_bound_sequence(
    family: Family,
    n_range: Iterable[int],
    epsilon=1,
    precision: int = 50,
    check_gaps: bool = True,
    T: int | None = None,
) -> DimensionReport:
    """Finite ratios from the exact counts ``m_k`` and the family's ``eps_n``.

    With ``check_gaps`` the measured gaps of every level from ``n0`` (thm2,
    thm3) or 1 (thm1) up to ``max(n_range) + 1`` are compared with ``eps_n``;
    a refuted level raises :class:`HypothesisViolationError`.
    """
    epsilon = as_rational(epsilon)
    n_range = list(n_range)
    if family.theorem == "none":
        raise ValueError("family_bound_sequence needs thm1, thm2 or thm3")
    seq, digits = family.sequence, family.digits
    top = max(n_range) + 1 if n_range else 0
    notes = []

    n0 = None
    if family.theorem in ("thm2", "thm3"):
        try:
            n0 = find_n0(family, epsilon, max(top, 1) + 2).n0
        except NotFoundError:
            notes.append(f"closed-form n0 not found up to level {max(top, 1) + 2}")

    checked = []
    if check_gaps and n_range:
        start = 1 if n0 is None else n0
        for k in range(start, top + 1):
            report = gap_report_for_level(family, k, epsilon, T)
            if report.degenerate:
                continue
            if report.gap_bound is Verdict.REFUTED:
                raise HypothesisViolationError(f"gap bound refuted at level {k}", report)
            checked.append((k, str(report.gap_bound)))

    counts = [digit_count(digits, seq, k) for k in range(1, top + 1)]
    rows = []
    for n in n_range:
        if n < 1:
            raise ValueError("levels start at 1")
        try:
            ratio = bf_ratio(counts[:n + 1], epsilon_n(family, n + 1, epsilon), precision)
            note = ""
        except NotApplicableError as exc:
            ratio, note = None, str(exc)
        rows.append(FiniteRatio(n, ratio, simplified_ratio(family, n, epsilon, precision), note))
    return DimensionReport(
        family,
        tuple(rows),
        closed_form_limit(family, precision),
        epsilon,
        n0,
        tuple(checked),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# box counting


@dataclass(frozen=True)
class BoxCountFit:
    slope: float
    intercept: float
    residual: float
    points: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "residual": self.residual, "points": self.points}


def _log_float(x) -> float:
    return float(ln_enclosure(x, 64).midpoint)


def boxcount_levels(
    seq,
    digits,
    levels: Iterable[int],
    T: int | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> list[tuple[mpq, int]]:
    """``(delta_n, N_n)`` per level: the largest certified interval width and the count.

    A level made of single points (width 0) uses ``1/a_n`` as its scale.
    """
    out = []
    for n in levels:
        ivs = build_level(seq, digits, n, T, budget=budget)
        delta = max(iv.right.hi - iv.left.lo for iv in ivs)
        if delta <= 0:
            delta = 1 / term(seq, n) if n >= 1 else mpq(1)
        out.append((delta, len(ivs)))
    return out


def boxcount_estimate(
    levels: Sequence[tuple],
    fit_range: slice | range | None = None,
    min_points: int = 3,
) -> BoxCountFit:
    """Least-squares slope of ``log N_n`` against ``log(1/delta_n)``.

    ``fit_range`` selects entries of ``levels`` (by position).
    """
    pts = list(levels)
    if isinstance(fit_range, range):
        pts = [pts[i] for i in fit_range]
    elif isinstance(fit_range, slice):
        pts = pts[fit_range]
    if len(pts) < min_points:
        raise InsufficientDataError(f"need at least {min_points} levels, got {len(pts)}")
    x = np.array([-_log_float(as_rational(d)) for d, _ in pts])
    y = np.array([_log_float(c) for _, c in pts])
    if np.ptp(x) == 0:
        raise InsufficientDataError("all scales coincide")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(np.linalg.norm(A @ np.array([slope, intercept]) - y))
    return BoxCountFit(float(slope), float(intercept), residual, len(pts))
