"""Nested Cantor intervals.

Fixing the first n digits pins the sum into an interval whose ends are the
all-largest-digit and all-smallest-digit continuations.  Here the level-3
intervals of a_n = 9^n, D = {1, 2} are built exactly, checked for
separation, and a point is located inside its nested chain.
"""

from __future__ import annotations

import sys

from expressible import build_level, classify_adjacent, interval_for_prefix, point_from_digits, thm1_family
from expressible.cantor import write_intervals_csv

fam = thm1_family(9, 2)
seq, digits = fam.sequence, fam.digits

level3 = build_level(seq, digits, 3)
print(f"{len(level3)} intervals at level 3, adjacent relations: {sorted(set(classify_adjacent(level3)))}")
write_intervals_csv(level3[:4], sys.stdout)

word = (2, 1, 1, 2, 1)
x = point_from_digits(seq, digits, word)
print("point for", word, "=", x.render(20))
for k in range(len(word) + 1):
    iv = interval_for_prefix(seq, digits, word[:k])
    print(f"  level {k}: [{iv.left.render(12)}, {iv.right.render(12)}] contains it: {iv.certainly_contains(x)}")
