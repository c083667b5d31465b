"""Number-theoretic side experiments.

The Sylvester sequence sums to 1/(a_1 - 1) exactly, its terms grow like
c^(2^n) with c about 1.264, points of a certified set decode back to their
digits, and convergents of a point hint at how well it is approximated by
rationals (this last one is exploratory only).
"""

from __future__ import annotations

from expressible import (
    decode_digits,
    exponent_probe,
    growth_limit_sequence,
    point_from_digits,
    telescoping_check,
    thm1_family,
    thm2_family,
)

for n in range(0, 6):
    res = telescoping_check(2, n)
    print(f"n = {n}: partial sum {res.partial_sum}, residual {res.residual}")

for n, enc in growth_limit_sequence(2, 8, precision=20):
    print(f"a_{n}^(1/2^{n}) = {enc.render(15)}")

geo = thm1_family(9, 2)
word = (1, 2, 2, 1, 2, 1, 1, 1, 2, 2)
x = point_from_digits(geo.sequence, geo.digits, word)
print("decoded:", decode_digits(x, geo.sequence, geo.digits, len(word)).to_dict())

fam = thm2_family(2, "2/5", "2/5")
y = point_from_digits(fam.sequence, fam.digits, (1, 1, 1, 1, 1), T=6)
probe = exponent_probe(y, 10**30, precision=12)
print(f"probe status {probe.status} ({probe.label})")
for row in probe.to_list(8)[:8]:
    print("  q =", row["q"][:20], "w =", row["exponent"])
