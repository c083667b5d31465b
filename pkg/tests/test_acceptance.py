"""Acceptance criteria, one test per criterion.

Each test records a single ``[PASS]``/``[FAIL]`` line and then asserts. Under
pytest the lines are printed in the terminal summary; as a script they are
printed as each criterion finishes.
Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from itertools import islice

import mpmath
import sympy
from gmpy2 import mpq

from expressible.cantor import build_level, children, classify_adjacent, level_count, point_from_digits
from expressible.dimension import boxcount_estimate, boxcount_levels, closed_form_limit, family_bound_sequence
from expressible.enclosure import Enclosure
from expressible.gaps import (
    Verdict,
    check_minbound2,
    epsilon_n,
    find_n0,
    gap_report_for_level,
    scanned_min_gap,
    thm1_gap_formula,
)
from expressible.probe import OUTSIDE, UNIQUE, decode_digits, growth_limit_sequence, telescoping_check
from expressible.sequences import digit_count, digit_set, thm1_family, thm2_family, thm3_family

mpmath.mp.dps = 50

THM1 = thm1_family(9, 2)
THM2 = thm2_family(2, "2/5", "2/5")
THM3 = thm3_family(3, "2/5", "2/5", "1/2")


RESULTS: list[str] = []


def report(number: int, ok: bool, detail: str, started: float) -> None:
    status = "PASS" if ok else "FAIL"
    RESULTS.append(f"[{status}] criterion {number}: {detail} ({time.perf_counter() - started:.2f}s)")
    if __name__ == "__main__":
        print(RESULTS[-1])


def to_mpf(x):
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)


def test_criterion_01_telescoping():
    t0 = time.perf_counter()
    residuals = [telescoping_check(a1, n).residual for a1 in (2, 3, 4, 5) for n in range(9)]
    ok = all(r == 0 for r in residuals)
    report(1, ok, f"{len(residuals)} residuals, all exactly zero: {ok}", t0)
    assert ok


def test_criterion_02_growth_constant():
    t0 = time.perf_counter()
    seq = growth_limit_sequence(2, 8, precision=30)
    last = seq[-1][1]
    close = abs(last.midpoint - mpq(1264, 1000)) <= mpq(5, 1000)
    tight = last.width < mpq(1, 10**6)
    decreasing = all(b.hi < a.lo for (_, a), (_, b) in zip(seq, seq[1:]))
    ok = close and tight and decreasing
    report(2, ok, f"a_8^(1/256) = {last.render(12)}, strictly decreasing: {decreasing}", t0)
    assert ok


def test_criterion_03_thm1_gap_formula():
    t0 = time.perf_counter()
    seq, digits = THM1.sequence, THM1.digits
    ok = True
    for n in range(1, 13):
        measured, _ = scanned_min_gap(seq, digits, n)
        formula = min(thm1_gap_formula(9, 2, n, k) for k in range(1, THM1.digits.K))
        eps = mpq(1, 9**n) * mpq(1, 2) * (mpq(1, 3) - mpq(1, 8))
        ok &= measured.is_exact and measured.lo == formula and formula >= eps
        ok &= epsilon_n(THM1, n) == eps
    report(3, ok, "levels 1..12: exact gap equals the formula and is >= eps_n", t0)
    assert ok


def test_criterion_04_thm1_limit():
    t0 = time.perf_counter()
    rep = family_bound_sequence(THM1, [1000], check_gaps=False)
    ratio = rep.ratio_at(1000)
    oracle = mpmath.log(2) / mpmath.log(9)
    err = abs(to_mpf(ratio.midpoint) - oracle)
    ok = err < mpmath.mpf("1e-3")
    report(4, ok, f"ratio(1000) = {ratio.render(8)}, oracle {mpmath.nstr(oracle, 8)}, |diff| = {mpmath.nstr(err, 3)}", t0)
    assert ok


def test_criterion_05_thm2():
    t0 = time.perf_counter()
    n0 = find_n0(THM2, 1).n0
    certified = all(
        check_minbound2(THM2.sequence, THM2.digits, n, 1) is Verdict.CERTIFIED for n in range(n0, n0 + 6)
    )
    ratio = family_bound_sequence(THM2, [12]).ratio_at(12)
    close = abs(ratio.midpoint - mpq(1, 4)) < mpq(1, 100)
    ok = n0 <= 10 and certified and close
    report(5, ok, f"n0 = {n0}, minbound2 certified on n0..n0+5: {certified}, ratio(12) = {ratio.render(6)}", t0)
    assert ok


def test_criterion_06_thm3():
    t0 = time.perf_counter()
    n0 = find_n0(THM3, 1).n0
    certified = all(gap_report_for_level(THM3, n, 1).certified for n in range(n0, n0 + 4))
    ratio = family_bound_sequence(THM3, [10]).ratio_at(10)
    close = abs(ratio.midpoint - mpq(1, 4)) < mpq(2, 100)
    ok = certified and close
    report(6, ok, f"n0 = {n0}, gaps certified on n0..n0+3: {certified}, ratio(10) = {ratio.render(6)}", t0)
    assert ok


def test_criterion_07_n2_agreement():
    t0 = time.perf_counter()
    s = sympy.symbols("s", positive=True)
    N = 2
    symbolic = sympy.simplify(s / ((N - 1) * (N - s)) - s / (2 - s)) == 0
    samples = [mpq(k, 20) for k in range(1, 10)]
    exact = all(
        closed_form_limit(thm2_family(2, v, v)) == closed_form_limit(thm3_family(2, v, v, "1/2"))
        for v in samples
    )
    ok = symbolic and exact
    report(7, ok, f"rational functions agree symbolically: {symbolic}, at {len(samples)} values of s: {exact}", t0)
    assert ok


def test_criterion_08_boxcount():
    t0 = time.perf_counter()
    fit = boxcount_estimate(boxcount_levels(THM1.sequence, THM1.digits, range(4, 11)))
    bound = float(closed_form_limit(THM1).midpoint)
    ok = abs(fit.slope - 0.315465) <= 0.05 * 0.315465 and fit.slope >= bound - 0.02
    report(8, ok, f"slope over levels 4..10 = {fit.slope:.6f}, bound {bound:.6f}", t0)
    assert ok


def test_criterion_09_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    seq, digits = THM1.sequence, THM1.digits
    round_trips = 0
    for _ in range(100):
        w = tuple(rng.choice((1, 2)) for _ in range(15))
        res = decode_digits(point_from_digits(seq, digits, w), seq, digits, 15)
        round_trips += res.status == UNIQUE and tuple(res.digits) == w
    outside = 0
    for _ in range(10):
        n = rng.randint(1, 15)
        parent = tuple(rng.choice((1, 2)) for _ in range(n - 1))
        hi_kid, lo_kid = children(seq, digits, parent)
        mid = (lo_kid.right.hi + hi_kid.left.lo) / 2
        res = decode_digits(Enclosure.exact(mid), seq, digits, 15)
        outside += res.status == OUTSIDE and res.level == n
    ok = round_trips == 100 and outside == 10
    report(9, ok, f"{round_trips}/100 words decoded uniquely, {outside}/10 gap midpoints outside", t0)
    assert ok


def _sample_children_disjoint(family, n) -> bool:
    """Adjacent children of the all-ones parent near both ends of D_n are separated."""
    seq, digits = family.sequence, family.digits
    ds = digit_set(digits, seq, n)
    head = list(islice(ds, 3))
    tail = [ds[ds.count - k] for k in (3, 2, 1)]
    kids = children(seq, digits, (1,) * (n - 1), child_digits=sorted(set(head + tail)))
    by_digit = {k.prefix[-1]: k for k in kids}
    ok = True
    for run in (head, tail):
        for a, b in zip(run, run[1:]):
            ok &= by_digit[b].right.hi < by_digit[a].left.lo
    return ok


def test_criterion_10_structure():
    t0 = time.perf_counter()
    instances = [(THM1, range(0, 11), True), (THM2, range(0, 5), False), (THM3, range(0, 4), False)]
    ok = True
    checked = 0
    for fam, levels, all_certified in instances:
        seq, digits = fam.sequence, fam.digits
        prev = None
        for n in levels:
            ivs = build_level(seq, digits, n)
            checked += len(ivs)
            ok &= len(ivs) == level_count(seq, digits, n)
            prod = 1
            for k in range(1, n + 1):
                prod *= digit_count(digits, seq, k)
            ok &= len(ivs) == prod
            ok &= all(a.left.lo <= b.left.lo for a, b in zip(ivs, ivs[1:]))
            if all_certified:
                ok &= all(r == "separated" for r in classify_adjacent(ivs))
            if prev is not None:
                parents = {iv.prefix: iv for iv in prev}
                for iv in ivs:
                    p = parents[iv.prefix[:-1]]
                    ok &= p.left.lo <= iv.left.lo and iv.right.hi <= p.right.hi
            prev = ivs
    for fam in (THM2, THM3):
        n0 = find_n0(fam, 1).n0
        for n in range(n0, n0 + 3):
            ok &= _sample_children_disjoint(fam, n)
    report(10, ok, f"{checked} intervals checked for nesting, order, counts and disjointness", t0)
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
