"""Words over {F, Fdg, H} with a float product cache and exact evaluation.

The product of a word is the left-to-right matrix product of its letters, so
the circuit that realises it applies the letters in reverse order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import numpy as np

from qcountsim.core.gaussian import GaussianInt
from qcountsim.skcompile.distance import proj_distance

ALPHABET = ("F", "Fdg", "H")
LETTER_ADJOINT = {"F": "Fdg", "Fdg": "F", "H": "H"}
LETTER_MATRIX = {
    "F": np.diag([1, 0.6 + 0.8j]),
    "Fdg": np.diag([1, 0.6 - 0.8j]),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
}
# numerators of the letters; F carries a factor 1/5, H a factor 1/sqrt(2)
_G = GaussianInt
_EXACT = {
    "F": ((_G(5), _G(0)), (_G(0), _G(3, 4))),
    "Fdg": ((_G(5), _G(0)), (_G(0), _G(3, -4))),
    "H": ((_G(1), _G(1)), (_G(1), _G(-1))),
}


def reduce_letters(letters) -> tuple[str, ...]:
    """Free reduction: cancel adjacent H H and F Fdg pairs."""
    out: list[str] = []
    for a in letters:
        if a not in LETTER_ADJOINT:
            raise ValueError(f"letter {a!r} is not in {ALPHABET}")
        if out and out[-1] == LETTER_ADJOINT[a]:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def _mul2(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


class GateWord:
    __slots__ = ("letters", "_product", "__dict__")

    def __init__(self, letters=(), product=None, reduce=True):
        letters = tuple(letters)
        self.letters = reduce_letters(letters) if reduce else letters
        self._product = None if product is None else np.asarray(product, dtype=complex)

    @classmethod
    def parse(cls, text: str) -> GateWord:
        return cls(text.replace("F†", "Fdg").split())

    @property
    def product(self) -> np.ndarray:
        if self._product is None:
            m = np.eye(2, dtype=complex)
            for a in self.letters:
                m = m @ LETTER_MATRIX[a]
            self._product = m
        return self._product

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, GateWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"GateWord({' '.join(self.letters) or 'I'})"

    def __str__(self):
        return " ".join(self.letters)

    def __matmul__(self, other: GateWord) -> GateWord:
        return GateWord(self.letters + other.letters, self.product @ other.product)

    def adjoint(self) -> GateWord:
        return GateWord([LETTER_ADJOINT[a] for a in reversed(self.letters)],
                        self.product.conj().T, reduce=False)

    def circuit_order(self) -> tuple[str, ...]:
        """Letters in the order a circuit applies them."""
        return self.letters[::-1]

    @cached_property
    def exact(self):
        """(numerator matrix over Z[i], f, h): product = numerators / (5^f sqrt(2)^h)."""
        m = ((_G(1), _G(0)), (_G(0), _G(1)))
        f = h = 0
        for a in self.letters:
            m = _mul2(m, _EXACT[a])
            if a == "H":
                h += 1
            else:
                f += 1
        return m, f, h

    def exact_matrix(self) -> np.ndarray:
        """Product entries rounded from the exact values (one rounding per part)."""
        m, f, h = self.exact
        den = 5**f * 2 ** (h // 2)
        scale = 1 / np.sqrt(2) if h % 2 else 1.0
        return np.array([[complex(float(Fraction(z.re, den)), float(Fraction(z.im, den))) * scale
                          for z in row] for row in m])

    def verified_distance(self, u) -> float:
        """proj_distance to ``u`` using the exactly evaluated product."""
        return proj_distance(self.exact_matrix(), u)
