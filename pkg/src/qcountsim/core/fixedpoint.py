"""Binary fixed-point complex values with explicit absolute error bounds.

A :class:`ComplexApprox` stores integers ``re`` and ``im`` meaning
``re / 2**k + i * im / 2**k``. ``err`` is a bound, in units of ``2**-k``, on
the distance of each component from the true value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from qcountsim.core.gaussian import ExactAmplitude


@dataclass(frozen=True)
class ComplexApprox:
    re: int
    im: int
    k: int
    err: int = 1

    @property
    def real(self) -> Fraction:
        return Fraction(self.re, 1 << self.k)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, 1 << self.k)

    @property
    def error_bound(self) -> Fraction:
        """Absolute error bound per component."""
        return Fraction(self.err, 1 << self.k)

    def __complex__(self):
        return complex(self.re / (1 << self.k), self.im / (1 << self.k))

    @classmethod
    def from_fractions(cls, re: Fraction, im: Fraction, k: int, err: int = 0) -> ComplexApprox:
        """Round exact rationals to ``k`` bits; rounding adds at most half an ulp."""
        rre, rim = _round_scaled(re, k), _round_scaled(im, k)
        exact = rre == re * (1 << k) and rim == im * (1 << k)
        return cls(rre, rim, k, err + (0 if exact else 1))

    def within(self, re: Fraction, im: Fraction) -> bool:
        """Whether the exact value ``re + i*im`` is consistent with this approximation."""
        bound = self.error_bound
        return abs(self.real - re) <= bound and abs(self.imag - im) <= bound


def _round_scaled(x: Fraction, k: int) -> int:
    scaled = Fraction(x) * (1 << k)
    return (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)


def sqrt_scaled(x: Fraction, k: int) -> int:
    """floor(sqrt(x) * 2**k) for a nonnegative rational ``x``; exact floor."""
    if x < 0:
        raise ValueError("square root of a negative rational")
    scaled = Fraction(x) * (1 << (2 * k))
    return isqrt(scaled.numerator // scaled.denominator)


def amplitude_value(a: ExactAmplitude, k: int) -> ComplexApprox:
    """Fixed-point value of ``num / (5^f * sqrt(2)^h)`` with error at most ``2**-k``."""
    if k < 1:
        raise ValueError("precision must be at least one bit")
    denom = 5**a.f * 2 ** (a.h // 2)
    re, im = Fraction(a.num.re, denom), Fraction(a.num.im, denom)
    if a.h % 2 == 0:
        return ComplexApprox.from_fractions(re, im, k)
    # one leftover 1/sqrt(2): v/sqrt(2) = sign(v) * sqrt(v^2 / 2)
    parts = []
    for v in (re, im):
        mag = sqrt_scaled(v * v / 2, k)
        parts.append(-mag if v < 0 else mag)
    return ComplexApprox(parts[0], parts[1], k, 1)
