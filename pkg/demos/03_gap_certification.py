"""Certifying the gaps between sibling intervals.

Disjointness of siblings is what turns the construction into a Cantor set.
For the doubly exponential families it is guaranteed from a threshold level
n0 on; below it, gaps may still hold but are not promised.  The script finds
n0 from the closed-form inequality and then checks measured gaps level by
level with exact arithmetic.
"""

from __future__ import annotations

from expressible import find_n0, gap_report_for_level, thm1_family, thm2_family, thm3_family

for fam in (thm2_family(2, "2/5", "2/5"), thm3_family(3, "2/5", "2/5", "1/2")):
    res = find_n0(fam, epsilon=1)
    print(f"{fam.theorem}: n0 = {res.n0}, inequality holds through n = {res.n_max}: {res.holds_on_range}")
    for n in range(max(res.n0 - 2, 2), res.n0 + 3):
        rep = gap_report_for_level(fam, n, epsilon=1)
        print(f"  level {n}: gap condition {rep.minbound2_holds}, gap >= eps_n {rep.gap_bound}")

# The geometric family needs no threshold: the gap equals eps_n at every level.
geo = thm1_family(9, 2)
for n in (1, 2, 3):
    rep = gap_report_for_level(geo, n, exhaustive=True)
    print(f"thm1 level {n}: min gap {rep.measured_min_gap.lo} vs eps_n {rep.epsilon_n} ({rep.gap_bound})")
