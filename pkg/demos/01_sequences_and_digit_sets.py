"""Sequences a_n and digit sets D_n.

An expressible set collects every sum  sum_n 1/(a_n d_n)  with d_n drawn from
D_n.  This script shows the three sequence shapes used throughout the
package and what their digit sets look like, including the checks each
family's hypotheses must pass.
"""

from __future__ import annotations

from itertools import islice

from expressible import (
    Recurrence,
    digit_set,
    term,
    thm1_family,
    thm2_family,
    thm3_family,
    validate_family,
)

# Geometric: a_n = 9^n with digits {1, 2}.
geo = thm1_family(9, 2)
print("a_n = 9^n:", [int(term(geo.sequence, n)) for n in range(1, 6)])
print("D_n =", [int(d) for d in digit_set(geo.digits, geo.sequence, 3)])

# Doubly exponential: a_n = 2^(2^n); m_n = floor(2^(s 2^n)) digits packed under the cap.
dexp = thm2_family(2, "2/5", "2/5")
for n in range(1, 7):
    ds = digit_set(dexp.digits, dexp.sequence, n)
    first = [int(d) for d in islice(ds, 4)]
    print(f"n={n}: a_n has {int(term(dexp.sequence, n)).bit_length()} bits, m_n = {int(ds.count)}, "
          f"digits start {first}, max {int(ds.max)}")

# Sylvester recurrence a_{n+1} = a_n^2 - a_n + 1.
print("Sylvester:", [int(term(Recurrence(2), n)) for n in range(1, 7)])

# Hypothesis reports list every check and its outcome.
for fam in (geo, thm1_family(9, 3), dexp, thm3_family(3, "2/5", "2/5", "1/2")):
    report = validate_family(fam)
    print(fam.theorem, "ok" if report.ok else f"fails {report.failures}")
