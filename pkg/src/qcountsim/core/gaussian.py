"""Gaussian integers and exactly-represented amplitudes num / (5^f * sqrt(2)^h)."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple


class GaussianInt(NamedTuple):
    """An element re + im*i of Z[i] with arbitrary-precision parts."""

    re: int = 0
    im: int = 0

    def __add__(self, other):
        other = _coerce(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        return gaussian_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm_sq(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"GaussianInt({self.re})"
        sign = "+" if self.im >= 0 else "-"
        return f"GaussianInt({self.re}{sign}{abs(self.im)}i)"

    # NamedTuple equality would treat GaussianInt(1, 0) == (1, 0); keep that,
    # but also let plain ints compare as real Gaussian integers.
    def __eq__(self, other):
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return tuple.__hash__(self)


def _coerce(value) -> GaussianInt:
    if isinstance(value, GaussianInt):
        return value
    if isinstance(value, int):
        return GaussianInt(value, 0)
    if isinstance(value, tuple) and len(value) == 2:
        return GaussianInt(*value)
    raise TypeError(f"cannot interpret {value!r} as a Gaussian integer")


def gaussian_mul(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    return GaussianInt(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I_UNIT = GaussianInt(0, 1)
F_NUM = GaussianInt(3, 4)
FDG_NUM = GaussianInt(3, -4)


class ExactAmplitude(NamedTuple):
    """The value ``num / (5**f * sqrt(2)**h)``, held without rounding."""

    num: GaussianInt
    f: int = 0
    h: int = 0

    def rescaled(self, f: int, h: int) -> ExactAmplitude:
        """Same value over a larger denominator (f and h may only grow)."""
        df, dh = f - self.f, h - self.h
        if df < 0 or dh < 0:
            raise ValueError("can only raise the denominator exponents")
        if dh % 2:
            # an odd number of extra sqrt(2) factors cannot be absorbed by Z[i]
            raise ValueError("h may only be raised by an even amount")
        scale = 5**df * 2 ** (dh // 2)
        return ExactAmplitude(GaussianInt(self.num.re * scale, self.num.im * scale), f, h)

    def __add__(self, other: ExactAmplitude) -> ExactAmplitude:
        if (self.f, self.h) != (other.f, other.h):
            f = max(self.f, other.f)
            h = max(self.h, other.h)
            if (h - self.h) % 2 or (h - other.h) % 2:
                raise ValueError("amplitudes with mismatched sqrt(2) parity")
            return self.rescaled(f, h) + other.rescaled(f, h)
        return ExactAmplitude(self.num + other.num, self.f, self.h)

    def norm_sq(self) -> Fraction:
        """|value|^2 as an exact rational."""
        return Fraction(self.num.norm_sq(), 25**self.f * 2**self.h)

    def value(self, k: int):
        from qcountsim.core.fixedpoint import amplitude_value

        return amplitude_value(self, k)

    def __complex__(self):
        return complex(self.num) / (5.0**self.f * 2.0 ** (self.h / 2))
