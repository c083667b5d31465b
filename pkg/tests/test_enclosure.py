from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from expressible.enclosure import (
    MAX_DIGIT,
    MIN_DIGIT,
    Enclosure,
    full_tail_enclosure,
    min_term_gap,
    tail_enclosure,
)
from expressible.errors import DegenerateDigitSetError
from expressible.logs import ln_enclosure, log_ratio
from expressible.sequences import (
    DoubleExpPow,
    ExplicitPerLevel,
    Geometric,
    Recurrence,
    UniformRange,
    digit_set,
    term,
    thm2_family,
)

mpmath.mp.dps = 80

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=50).map(
    lambda f: mpq(f.numerator, f.denominator)
)


@st.composite
def enclosures(draw):
    a, b = draw(rationals), draw(rationals)
    return Enclosure(min(a, b), max(a, b))


def test_enclosure_rejects_empty():
    with pytest.raises(ValueError):
        Enclosure(mpq(1), mpq(0))


def test_basic_accessors():
    e = Enclosure(mpq(1, 4), mpq(3, 4))
    assert e.width == mpq(1, 2)
    assert e.midpoint == mpq(1, 2)
    assert e.radius == mpq(1, 4)
    assert mpq(1, 3) in e and mpq(1, 5) not in e
    assert Enclosure.exact(mpq(2, 7)).is_exact


@given(enclosures(), enclosures(), st.integers(0, 10), st.integers(0, 10))
@settings(max_examples=200, deadline=None)
def test_arithmetic_contains_pointwise_results(x, y, i, j):
    # sample points inside each enclosure and check every operation contains the exact result
    px = x.lo + (x.hi - x.lo) * mpq(i, 10)
    py = y.lo + (y.hi - y.lo) * mpq(j, 10)
    assert px + py in x + y
    assert px - py in x - y
    assert px * py in x * y
    if not (y.lo <= 0 <= y.hi):
        assert px / py in x / y


def test_division_by_enclosure_containing_zero():
    with pytest.raises(ZeroDivisionError):
        Enclosure(mpq(1), mpq(2)) / Enclosure(mpq(-1), mpq(1))


def test_render_only_prints_agreeing_digits():
    e = Enclosure(mpq(314159, 100000), mpq(314161, 100000))
    value, err = e.decimal_pair(10)
    assert value.startswith("3.141")
    assert Fraction(err) >= Fraction(1, 100000)
    assert "±" in e.render(10)


@pytest.mark.parametrize("x", [2, 3, 10, mpq(1, 3), mpq(7, 5), 10**40 + 7, mpq(1, 10**30)])
def test_ln_enclosure_contains_mpmath(x):
    enc = ln_enclosure(x, 200)
    ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator if isinstance(x, type(mpq(0))) else x)
    lo = mpmath.mpf(enc.lo.numerator) / enc.lo.denominator
    hi = mpmath.mpf(enc.hi.numerator) / enc.hi.denominator
    assert lo <= ref <= hi
    assert enc.width < mpq(1, 10**50)


def test_log_ratio_two_nine():
    enc = log_ratio(2, 9, 200)
    ref = mpmath.log(2) / mpmath.log(9)
    assert mpmath.mpf(enc.lo.numerator) / enc.lo.denominator <= ref
    assert ref <= mpmath.mpf(enc.hi.numerator) / enc.hi.denominator


def test_geometric_tail_closed_form():
    assert tail_enclosure(Geometric(9), UniformRange(2), 0, MIN_DIGIT) == Enclosure.exact(mpq(1, 8))
    assert tail_enclosure(Geometric(9), UniformRange(2), 0, MAX_DIGIT) == Enclosure.exact(mpq(1, 16))


def test_sylvester_tail_contains_one():
    enc = tail_enclosure(Recurrence(2), UniformRange(1), 0, MIN_DIGIT, 5)
    assert 1 in enc
    assert enc.width <= 2 / term(Recurrence(2), 6)


def test_tail_with_depth_equal_level():
    seq = DoubleExpPow(2)
    enc = tail_enclosure(seq, UniformRange(1), 3, MIN_DIGIT, 3)
    assert enc.lo == 0 and enc.hi == 2 / term(seq, 4)
    deeper = full_tail_enclosure(seq, UniformRange(1), 3, 6)
    assert enc.lo <= deeper.lo and deeper.hi <= enc.hi


@pytest.mark.parametrize("seq", [DoubleExpPow(2), Recurrence(3), Geometric("5/2")])
def test_tail_containment_as_depth_grows(seq):
    digits = ExplicitPerLevel(((1, 2, 5),))
    for mode in (MIN_DIGIT, MAX_DIGIT):
        prev = tail_enclosure(seq, digits, 1, mode, 2)
        for T in range(3, 6):
            cur = tail_enclosure(seq, digits, 1, mode, T)
            assert prev.lo <= cur.lo and cur.hi <= prev.hi
            assert cur.width <= prev.width / 2 or isinstance(seq, Geometric)
            prev = cur


def test_min_term_gap_examples():
    assert min_term_gap(Geometric(9), UniformRange(2), 1) == mpq(1, 18)
    seq = DoubleExpPow(2)
    digits = ExplicitPerLevel(((1, 7),))
    assert min_term_gap(seq, digits, 3) == (1 - mpq(1, 7)) / term(seq, 3)
    with pytest.raises(DegenerateDigitSetError):
        min_term_gap(Geometric(9), UniformRange(1), 1)


@given(st.lists(st.integers(2, 200), min_size=1, max_size=8, unique=True), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_min_term_gap_matches_brute_force(extra, n):
    level = tuple(sorted({1, *extra}))
    digits = ExplicitPerLevel((level,))
    seq = Geometric(3)
    a = term(seq, n)
    brute = min(abs(1 / (x * a) - 1 / (y * a)) for x, y in combinations(level, 2))
    assert min_term_gap(seq, digits, n) == brute


def test_min_term_gap_theorem_family_lower_bound():
    fam = thm2_family(2, "2/5", "2/5")
    seq, digits = fam.sequence, fam.digits
    for n in range(2, 7):
        gap = min_term_gap(seq, digits, n)
        # two largest digits d_{m-1} < d_m <= cap give at least 1/(a_n d_m^2)
        d_max = digit_set(digits, seq, n).max
        assert gap >= 1 / (term(seq, n) * d_max**2)
