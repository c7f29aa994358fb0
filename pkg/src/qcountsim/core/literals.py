"""Closed-form matrix-entry literals.

Grammar (whitespace is ignored)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | atom
    atom  := 'rat' '(' ratio ')' | 'sqrt' '(' ratio | 'rat' '(' ratio ')' ')'
           | 'cis' '(' ratio ')' | INT | 'i' | '(' expr ')'
    ratio := ['-'] INT ['/' INT]

``cis(p/q)`` means exp(i*pi*p/q). Every literal can be evaluated to any
number of bits with a sound error bound, using interval arithmetic.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import finf, fnan, fninf, to_rational

from qcountsim.core.fixedpoint import ComplexApprox


class LiteralError(ValueError):
    """Malformed or unevaluable entry literal."""


# mpmath's interval context keeps its precision globally
_IV_LOCK = threading.Lock()

# exact Gaussian rational: (re, im)
GaussRat = tuple[Fraction, Fraction]


class Expr:
    def exact(self) -> GaussRat | None:
        """Exact value when the literal is a Gaussian rational, else None."""
        raise NotImplementedError

    def interval(self):
        """(re, im) as mpmath intervals at the current ``iv.prec``."""
        raise NotImplementedError

    def __add__(self, other):
        return BinOp("+", self, other)

    def __sub__(self, other):
        return BinOp("-", self, other)

    def __mul__(self, other):
        return BinOp("*", self, other)

    def __truediv__(self, other):
        return BinOp("/", self, other)

    def __neg__(self):
        return Neg(self)


def _frac_iv(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _frac_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Const(Expr):
    re: Fraction
    im: Fraction = Fraction(0)

    def exact(self):
        return (self.re, self.im)

    def interval(self):
        return _frac_iv(self.re), _frac_iv(self.im)

    def __str__(self):
        if self.im == 0:
            return f"rat({_frac_text(self.re)})"
        if self.re == 0:
            return "i" if self.im == 1 else f"rat({_frac_text(self.im)})*i"
        return f"(rat({_frac_text(self.re)})+rat({_frac_text(self.im)})*i)"


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Fraction

    def exact(self):
        num, den = self.arg.numerator, self.arg.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        return (Fraction(rn, rd), Fraction(0))

    def interval(self):
        return iv.sqrt(_frac_iv(self.arg)), iv.mpf(0)

    def __str__(self):
        return f"sqrt({_frac_text(self.arg)})"


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


@dataclass(frozen=True)
class Cis(Expr):
    """exp(i * pi * turns)."""

    turns: Fraction

    def exact(self):
        twice = 2 * self.turns
        if twice.denominator != 1:
            return None
        return [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
                (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))][int(twice) % 4]

    def interval(self):
        angle = iv.pi * _frac_iv(self.turns)
        return iv.cos(angle), iv.sin(angle)

    def __str__(self):
        return f"cis({_frac_text(self.turns)})"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def exact(self):
        v = self.arg.exact()
        return None if v is None else (-v[0], -v[1])

    def interval(self):
        r, i = self.arg.interval()
        return -r, -i

    def __str__(self):
        return f"-({self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def exact(self):
        a, b = self.left.exact(), self.right.exact()
        if a is None or b is None:
            return None
        return _combine(self.op, a, b)

    def interval(self):
        return _combine(self.op, self.left.interval(), self.right.interval())

    def __str__(self):
        return f"({self.left}{self.op}{self.right})"


def _combine(op, a, b):
    (ar, ai), (br, bi) = a, b
    if op == "+":
        return ar + br, ai + bi
    if op == "-":
        return ar - br, ai - bi
    if op == "*":
        return ar * br - ai * bi, ar * bi + ai * br
    if op == "/":
        den = br * br + bi * bi
        if isinstance(den, Fraction) and den == 0:
            raise LiteralError("division by zero in literal")
        try:
            return (ar * br + ai * bi) / den, (ai * br - ar * bi) / den
        except ZeroDivisionError as exc:
            raise LiteralError("division by zero in literal") from exc
    raise LiteralError(f"unknown operator {op!r}")


def evaluate(expr: Expr, k: int) -> ComplexApprox:
    """Fixed-point value of ``expr`` with per-component error at most ``2**-k``."""
    if k < 1:
        raise ValueError("precision must be at least one bit")
    ex = expr.exact()
    if ex is not None:
        return ComplexApprox.from_fractions(ex[0], ex[1], k)
    prec = k + 32
    for _ in range(8):
        with _IV_LOCK:
            saved = iv.prec
            iv.prec = prec
            try:
                re_iv, im_iv = expr.interval()
                parts = [_to_fractions(re_iv), _to_fractions(im_iv)]
            except ZeroDivisionError as exc:
                raise LiteralError("division by zero in literal") from exc
            finally:
                iv.prec = saved
        # interval width must stay under a quarter ulp so that
        # rounding the midpoint keeps the total error below one ulp
        if all(hi - lo <= Fraction(1, 1 << (k + 2)) for lo, hi in parts):
            mids = [(lo + hi) / 2 for lo, hi in parts]
            return ComplexApprox.from_fractions(mids[0], mids[1], k)
        prec *= 2
    raise LiteralError("literal did not converge (unbounded interval)")


def _to_fractions(x):
    if isinstance(x, Fraction):
        return x, x
    lo, hi = x._mpi_
    if lo in (finf, fninf, fnan) or hi in (finf, fninf, fnan):
        raise LiteralError("literal evaluates to an unbounded interval")
    try:
        return tuple(Fraction(int(p), int(q)) for p, q in (to_rational(lo), to_rational(hi)))
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise LiteralError("literal evaluates to an unbounded interval") from exc


def to_complex(expr: Expr) -> complex:
    ex = expr.exact()
    if ex is not None:
        return complex(float(ex[0]), float(ex[1]))
    return complex(evaluate(expr, 64))


def rat(x) -> Const:
    return Const(Fraction(x))


def from_complex(z: complex) -> Const:
    """Literal holding the exact binary value of a floating-point complex."""
    return Const(Fraction(float(z.real)), Fraction(float(z.imag)))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


def parse_literal(text: str) -> Expr:
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            tokens.append(("int", m.group(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2)))
        elif m.group(3):
            tokens.append(("sym", m.group(3)))
    parser = _LiteralParser(tokens, text)
    expr = parser.expr()
    if parser.pos != len(tokens):
        raise LiteralError(f"unexpected {tokens[parser.pos][1]!r} in literal {text!r}")
    return expr


class _LiteralParser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        kind, tok = self.peek()
        if kind is None or (value is not None and tok != value):
            want = value if value is not None else "a token"
            raise LiteralError(f"expected {want!r} in literal {self.text!r}")
        self.pos += 1
        return kind, tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def ratio(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, tok = self.take()
        if kind != "int":
            raise LiteralError(f"expected an integer in literal {self.text!r}")
        num = int(tok)
        den = 1
        if self.peek()[1] == "/":
            self.take()
            kind, tok = self.take()
            if kind != "int":
                raise LiteralError(f"expected a denominator in literal {self.text!r}")
            den = int(tok)
            if den == 0:
                raise LiteralError(f"zero denominator in literal {self.text!r}")
        return sign * Fraction(num, den)

    def atom(self):
        kind, tok = self.peek()
        if kind == "int":
            self.take()
            return Const(Fraction(int(tok)))
        if kind == "name":
            self.take()
            if tok == "i":
                return Const(Fraction(0), Fraction(1))
            if tok not in ("rat", "sqrt", "cis"):
                raise LiteralError(f"unknown function {tok!r} in literal {self.text!r}")
            self.take("(")
            if tok == "sqrt" and self.peek()[1] == "rat":
                self.take()
                self.take("(")
                value = self.ratio()
                self.take(")")
            else:
                value = self.ratio()
            self.take(")")
            if tok == "rat":
                return Const(value)
            if tok == "sqrt":
                if value < 0:
                    raise LiteralError(f"square root of a negative number in {self.text!r}")
                return Sqrt(value)
            return Cis(value)
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise LiteralError(f"unexpected {tok!r} in literal {self.text!r}")
