"""Dimension lower bounds and box counting.

The finite ratios log(m_1...m_n) / -log(m_{n+1} eps_{n+1}) climb towards the
closed-form limit of each family.  For a_n = 9^n, D = {1, 2} the limit is
log 2 / log 9, and a box-counting regression over the exact intervals lands
on the same value.
"""

from __future__ import annotations

from expressible import (
    boxcount_estimate,
    boxcount_levels,
    closed_form_limit,
    family_bound_sequence,
    thm1_family,
    thm2_family,
    thm3_family,
)

geo = thm1_family(9, 2)
report = family_bound_sequence(geo, [1, 10, 100, 1000], check_gaps=False)
print("limit log2/log9 =", closed_form_limit(geo).render(15))
for fr in report.finite_ratios:
    print(f"  n = {fr.n:4d}: ratio {fr.ratio.render(10)}")

for fam, n in ((thm2_family(2, "2/5", "2/5"), 12), (thm3_family(3, "2/5", "2/5", "1/2"), 10)):
    rep = family_bound_sequence(fam, range(n - 3, n + 1))
    print(f"{fam.theorem}: limit {closed_form_limit(fam).lo}, gaps checked on levels "
          f"{rep.gap_levels_checked[0][0]}..{rep.gap_levels_checked[-1][0]}")
    for fr in rep.finite_ratios:
        print(f"  n = {fr.n}: ratio {fr.ratio.render(8)}")

levels = boxcount_levels(geo.sequence, geo.digits, range(4, 11))
fit = boxcount_estimate(levels)
print(f"box-counting slope over levels 4..10: {fit.slope:.6f} (residual {fit.residual:.1e})")
