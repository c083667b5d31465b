from __future__ import annotations

import random

import mpmath
import pytest
from gmpy2 import mpq

from expressible.cantor import build_level, children, point_from_digits
from expressible.enclosure import Enclosure
from expressible.errors import DepthExceededError, ValidationError
from expressible.probe import (
    AMBIGUOUS,
    COMPLETE,
    OUTSIDE,
    PRECISION_EXHAUSTED,
    UNIQUE,
    continued_fraction,
    convergents,
    decode_digits,
    exponent_probe,
    growth_limit_sequence,
    telescoping_check,
)
from expressible.sequences import Geometric, UniformRange, thm1_family, thm2_family

THM1 = thm1_family(9, 2)


def test_telescoping_hand_values():
    res = telescoping_check(2, 4)
    assert res.residual == 0
    assert res.partial_sum == 1 - mpq(1, 1806)
    assert telescoping_check(3, 1).residual == 0
    for a1 in range(2, 11):
        assert telescoping_check(a1, 0).residual == 0
        assert telescoping_check(a1, 0).tail == mpq(1, a1 - 1)


def test_growth_limit_values():
    seq = growth_limit_sequence(2, 8, 30)
    n1 = seq[0][1]
    assert n1.lo <= mpq(141421356, 10**8) + mpq(1, 10**8)
    assert abs(n1.midpoint - mpq(141421, 100000)) < mpq(1, 10**5)
    values = [enc for _, enc in seq]
    assert all(b.hi < a.lo for a, b in zip(values, values[1:]))
    assert all(v.lo > 1 for v in values)
    assert values[-1].width <= mpq(1, 10**30)


def test_growth_limit_against_mpmath():
    mpmath.mp.dps = 60
    for n, enc in growth_limit_sequence(3, 5, 40):
        a = [3]
        for _ in range(n - 1):
            a.append(a[-1] ** 2 - a[-1] + 1)
        ref = mpmath.root(a[-1], 2**n)
        assert mpmath.mpf(int(enc.lo.numerator)) / int(enc.lo.denominator) <= ref
        assert ref <= mpmath.mpf(int(enc.hi.numerator)) / int(enc.hi.denominator)


def test_growth_limit_budget():
    with pytest.raises(DepthExceededError):
        growth_limit_sequence(2, 20, 50)


def test_continued_fraction_and_convergents():
    assert continued_fraction(mpq(355, 113)) == [3, 7, 16]
    assert convergents([3, 7, 16]) == [(3, 1), (22, 7), (355, 113)]
    assert convergents([]) == []


def test_exponent_probe_rational_hit():
    res = exponent_probe(Enclosure.exact(mpq(1, 3)), 100)
    assert res.status == COMPLETE
    last = res.rows[-1]
    assert (last.p, last.q) == (1, 3)
    assert last.unbounded and last.exponent is None
    assert res.label == "exploratory"


def test_exponent_probe_golden_ratio_tends_to_two():
    # ratio of consecutive Fibonacci numbers: all partial quotients equal 1
    a, b = 1, 1
    for _ in range(80):
        a, b = b, a + b
    x = Enclosure.exact(mpq(b, a))
    res = exponent_probe(x, 10**12)
    ws = [row.exponent for row in res.rows if row.exponent is not None]
    assert abs(ws[-1].midpoint - 2) < mpq(1, 10)
    assert abs(ws[-1].midpoint - 2) < abs(ws[2].midpoint - 2)


def test_convergent_inequality_on_thm2_point():
    fam = thm2_family(2, "2/5", "2/5")
    x = point_from_digits(fam.sequence, fam.digits, (1, 1, 1, 1, 1), T=6)
    xr = x.lo  # a truncation, exactly rational
    cf = continued_fraction(xr)
    conv = convergents(cf)
    pairs = list(zip(conv, conv[1:]))
    for (p, q), (_, q_next) in pairs[:-1]:
        assert abs(xr - mpq(p, q)) < mpq(1, q * q_next)
    # the last step reaches x itself, where the bound is attained
    (p, q), (_, q_next) = pairs[-1]
    assert abs(xr - mpq(p, q)) == mpq(1, q * q_next)
    res = exponent_probe(Enclosure.exact(xr), 10**15)
    assert [(r.p, r.q) for r in res.rows] == [pq for pq in conv if pq[1] <= 10**15]


def test_exponent_probe_wide_input_is_precision_exhausted():
    res = exponent_probe(Enclosure(mpq(314159, 10**5), mpq(314160, 10**5)), 10**9)
    assert res.status == PRECISION_EXHAUSTED
    assert all(row.q < 10**4 for row in res.rows)


def test_decode_round_trip_small():
    rng = random.Random(7)
    seq, digits = THM1.sequence, THM1.digits
    for _ in range(20):
        w = tuple(rng.choice((1, 2)) for _ in range(8))
        x = point_from_digits(seq, digits, w)
        res = decode_digits(x, seq, digits, 8)
        assert res.status == UNIQUE and tuple(res.digits) == w


def test_decode_gap_midpoint_is_outside():
    seq, digits = THM1.sequence, THM1.digits
    kids = children(seq, digits, (1, 2))
    mid = (kids[0].left.lo + kids[1].right.hi) / 2
    res = decode_digits(Enclosure.exact(mid), seq, digits, 5)
    assert res.status == OUTSIDE and res.level == 3


def test_decode_overlapping_family_is_ambiguous():
    seq, digits = Geometric(2), UniformRange(3)
    x = build_level(seq, digits, 1)[1].right
    res = decode_digits(x, seq, digits, 4)
    assert res.status == AMBIGUOUS


def test_decode_wide_input():
    seq, digits = THM1.sequence, THM1.digits
    x = Enclosure(mpq(1, 16), mpq(1, 8))
    assert decode_digits(x, seq, digits, 3).status == PRECISION_EXHAUSTED


def test_decode_rejects_nonpositive():
    with pytest.raises(ValidationError):
        decode_digits(Enclosure.exact(mpq(0)), THM1.sequence, THM1.digits, 3)
