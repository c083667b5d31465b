"""Certified natural logarithms of exact rationals.

``ln m`` for an integer ``m`` is split as ``k ln 2 + ln y`` with
``k = bit_length(m) - 1`` and ``y = m / 2**k`` in ``[1, 2)``.  Both pieces
come from the series ``ln y = 2 atanh((y - 1)/(y + 1))`` evaluated in
fixed point with ``W`` fractional bits.  With ``z <= 1/3`` every rounded
power of ``z`` stays within a few units of the last place, which gives the
explicit bound used below.
"""

from __future__ import annotations

import math
from functools import lru_cache

from gmpy2 import mpq, mpz

from .enclosure import Enclosure
from .sequences import as_rational


def bits_for_digits(digits: int) -> int:
    """Binary precision matching ``digits`` decimal digits, plus guard bits."""
    return math.ceil(digits * math.log2(10)) + 16


def _atanh_fixed(num: int, den: int, W: int) -> tuple[mpz, int]:
    """``(S, err)`` with ``|atanh(num/den) * 2**W - S| <= err`` for ``0 <= num/den <= 1/3``."""
    z = (mpz(num) << W) // den
    z2 = (z * z) >> W
    power, total, j = z, mpz(0), 0
    while power:
        total += power // (2 * j + 1)
        power = (power * z2) >> W
        j += 1
    # per-term rounding <= 6.5 ulp; truncated tail <= 7 ulp
    return total, 7 * j + 8


@lru_cache(maxsize=64)
def _ln2_fixed(W: int) -> tuple[mpz, int]:
    s, err = _atanh_fixed(1, 3, W)
    return 2 * s, 2 * err


def _ln_int_fixed(m: int, bits: int) -> tuple[mpz, mpz, int]:
    """Return ``(lo, hi, W)`` with ``lo / 2**W <= ln m <= hi / 2**W``."""
    m = mpz(m)
    if m < 1:
        raise ValueError("logarithm of a nonpositive integer")
    k = m.bit_length() - 1
    W = bits + k.bit_length() + bits.bit_length() + 12
    if k >= W:
        Y = m >> (k - W)
        truncated = (Y << (k - W)) != m
    else:
        Y = m << (W - k)
        truncated = False
    one = mpz(1) << W
    s, err = _atanh_fixed(Y - one, Y + one, W)
    ln_y_lo, ln_y_hi = 2 * s - 2 * err, 2 * s + 2 * err
    if truncated:
        # ln(y) - ln(Y/2**W) <= (y - Y/2**W) * 2**W / Y < 2**-W
        ln_y_hi += 1
    if k == 0:
        return max(ln_y_lo, mpz(0)), ln_y_hi, W
    l2, e2 = _ln2_fixed(W)
    return k * (l2 - e2) + ln_y_lo, k * (l2 + e2) + ln_y_hi, W


def ln_enclosure(x, bits: int = 200) -> Enclosure:
    """Enclosure of ``ln x`` for rational ``x > 0`` with width about ``2**-bits``."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("logarithm of a nonpositive number")
    p, q = x.numerator, x.denominator
    if p == q:
        return Enclosure.exact(0)
    plo, phi, Wp = _ln_int_fixed(p, bits)
    lo, hi = mpq(plo, mpz(1) << Wp), mpq(phi, mpz(1) << Wp)
    if q != 1:
        qlo, qhi, Wq = _ln_int_fixed(q, bits)
        lo -= mpq(qhi, mpz(1) << Wq)
        hi -= mpq(qlo, mpz(1) << Wq)
    return Enclosure(lo, hi)


def log_ratio(num, den, bits: int = 200) -> Enclosure:
    """Enclosure of ``ln(num) / ln(den)``."""
    return ln_enclosure(num, bits) / ln_enclosure(den, bits)
