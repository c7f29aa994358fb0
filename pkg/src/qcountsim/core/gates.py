"""Gate matrices, gate applications and the universal library {CNOT, F, F†, H, I}."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

import numpy as np

from qcountsim.core.fixedpoint import ComplexApprox
from qcountsim.core.literals import Expr, LiteralError, evaluate, from_complex, parse_literal


class GateError(ValueError):
    pass


@dataclass(frozen=True)
class UnitaryMatrix:
    """A ``dim`` x ``dim`` matrix of closed-form entry literals.

    ``error_bound`` is nonzero for matrices computed numerically (for instance by
    the decomposition pass); it bounds the operator-norm distance between the
    stored entries and the ideal matrix they approximate.
    """

    dim: int
    entries: tuple[tuple[Expr, ...], ...]
    name: str | None = None
    error_bound: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.dim < 1 or self.dim & (self.dim - 1):
            raise GateError(f"matrix dimension {self.dim} is not a power of two")
        if len(self.entries) != self.dim or any(len(r) != self.dim for r in self.entries):
            raise GateError(f"expected a {self.dim}x{self.dim} grid of entries")

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @classmethod
    def from_literals(cls, dim: int, literals, name=None) -> UnitaryMatrix:
        flat = [parse_literal(t) if isinstance(t, str) else t for t in literals]
        if len(flat) != dim * dim:
            raise GateError(f"gate of dimension {dim} needs {dim * dim} entries, got {len(flat)}")
        rows = tuple(tuple(flat[r * dim:(r + 1) * dim]) for r in range(dim))
        return cls(dim, rows, name)

    @classmethod
    def from_array(cls, arr, name=None, error_bound: float = 0.0) -> UnitaryMatrix:
        arr = np.asarray(arr, dtype=complex)
        rows = tuple(tuple(from_complex(z) for z in row) for row in arr)
        m = cls(arr.shape[0], rows, name, error_bound)
        m._cache["numpy"] = arr.copy()
        return m

    def entry(self, row: int, col: int) -> Expr:
        return self.entries[row][col]

    def to_numpy(self) -> np.ndarray:
        if "numpy" not in self._cache:
            from qcountsim.core.literals import to_complex

            self._cache["numpy"] = np.array(
                [[to_complex(e) for e in row] for row in self.entries], dtype=complex
            )
        return self._cache["numpy"].copy()

    def exact(self):
        """Entries as exact Gaussian rationals, or None if any entry is irrational."""
        if "exact" not in self._cache:
            vals = [[e.exact() for e in row] for row in self.entries]
            ok = all(v is not None for row in vals for v in row)
            self._cache["exact"] = vals if ok else None
        return self._cache["exact"]

    def literal_text(self) -> list[str]:
        return [str(e) for row in self.entries for e in row]


def matrix_entry_bits(u: UnitaryMatrix, row: int, col: int, k: int) -> ComplexApprox:
    if not (0 <= row < u.dim and 0 <= col < u.dim):
        raise GateError(f"entry ({row}, {col}) outside a {u.dim}x{u.dim} matrix")
    if k < 1:
        raise ValueError("precision must be at least one bit")
    return evaluate(u.entry(row, col), k)


def unitarity_check(u: UnitaryMatrix, tol: float) -> bool:
    """True iff max |(U U†)_ij - δ_ij| <= tol, judged at a precision whose error is < tol/4."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    tol = Fraction(tol)
    k = max(8, ceil(log2(1 / tol)) + 8 + u.dim.bit_length())
    while True:
        approx = [[matrix_entry_bits(u, r, c, k) for c in range(u.dim)] for r in range(u.dim)]
        big = max(max(abs(a.re), abs(a.im)) for row in approx for a in row)
        amax = Fraction(big + 1, 1 << k) * 2  # |entry| upper bound (both components)
        delta = Fraction(2, 1 << k)  # complex error per entry, sqrt(2)*2^-k < 2*2^-k
        budget = u.dim * (2 * amax * delta + delta * delta)
        if budget < tol / 4:
            break
        k += 16
    scale = 1 << (2 * k)
    worst = Fraction(0)
    for i in range(u.dim):
        for j in range(u.dim):
            re = sum(a.re * b.re + a.im * b.im for a, b in zip(approx[i], approx[j]))
            im = sum(a.im * b.re - a.re * b.im for a, b in zip(approx[i], approx[j]))
            if i == j:
                re -= scale
            dev2 = Fraction(re * re + im * im, scale * scale)
            worst = max(worst, dev2)
    return worst <= tol * tol


def numeric_unitarity_error(arr: np.ndarray) -> float:
    arr = np.asarray(arr)
    return float(np.max(np.abs(arr @ arr.conj().T - np.eye(arr.shape[0]))))


# ------------------------------------------------------------------ gates

UNITARY = "unitary"
QUERY = "query"
MEASURE = "measure"


@dataclass(frozen=True)
class Gate:
    """One gate application: a library unitary, a query, or a measurement."""

    kind: str
    qubits: tuple[int, ...]
    name: str | None = None

    @classmethod
    def unitary(cls, name: str, *qubits: int) -> Gate:
        return cls(UNITARY, tuple(qubits), name)

    @classmethod
    def query(cls, address, target: int) -> Gate:
        return cls(QUERY, tuple(address) + (target,), "QUERY")

    @classmethod
    def measure(cls, qubit: int) -> Gate:
        return cls(MEASURE, (qubit,), "MEASURE")

    @property
    def address(self) -> tuple[int, ...]:
        return self.qubits[:-1]

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def validate(self, num_qubits: int):
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"{self}: repeated qubit index")
        bad = [q for q in self.qubits if not 0 <= q < num_qubits]
        if bad:
            raise GateError(f"{self}: qubit {bad[0]} outside register of width {num_qubits}")

    def __str__(self):
        if self.kind == QUERY:
            return f"QUERY {' '.join(map(str, self.address))} -> {self.target}"
        if self.kind == MEASURE:
            return f"MEASURE {self.qubits[0]}"
        return f"U {self.name} {' '.join(map(str, self.qubits))}"


def _lib(name, dim, *lits):
    return UnitaryMatrix.from_literals(dim, lits, name)


LIBRARY: dict[str, UnitaryMatrix] = {
    "I": _lib("I", 2, "1", "0", "0", "1"),
    "H": _lib("H", 2, "sqrt(1/2)", "sqrt(1/2)", "sqrt(1/2)", "-sqrt(1/2)"),
    "F": _lib("F", 2, "1", "0", "0", "rat(3/5)+rat(4/5)*i"),
    "Fdg": _lib("Fdg", 2, "1", "0", "0", "rat(3/5)-rat(4/5)*i"),
    "CNOT": _lib("CNOT", 4, *"1 0 0 0  0 1 0 0  0 0 0 1  0 0 1 0".split()),
    "X": _lib("X", 2, "0", "1", "1", "0"),
    "Y": _lib("Y", 2, "0", "-i", "i", "0"),
    "Z": _lib("Z", 2, "1", "0", "0", "-1"),
    "S": _lib("S", 2, "1", "0", "0", "i"),
    "Sdg": _lib("Sdg", 2, "1", "0", "0", "-i"),
    "T": _lib("T", 2, "1", "0", "0", "cis(1/4)"),
    "Tdg": _lib("Tdg", 2, "1", "0", "0", "cis(-1/4)"),
    "SWAP": _lib("SWAP", 4, *"1 0 0 0  0 0 1 0  0 1 0 0  0 0 0 1".split()),
    "CZ": _lib("CZ", 4, *"1 0 0 0  0 1 0 0  0 0 1 0  0 0 0 -1".split()),
    "TOFFOLI": _lib("TOFFOLI", 8, *(
        "1 0 0 0 0 0 0 0  0 1 0 0 0 0 0 0  0 0 1 0 0 0 0 0  0 0 0 1 0 0 0 0 "
        "0 0 0 0 1 0 0 0  0 0 0 0 0 1 0 0  0 0 0 0 0 0 0 1  0 0 0 0 0 0 1 0").split()),
}

ALIASES = {"F†": "Fdg", "Fdag": "Fdg", "CX": "CNOT", "CCX": "TOFFOLI", "ID": "I"}

UNIVERSAL = frozenset({"CNOT", "F", "Fdg", "H", "I"})

# adjoint within the single-qubit alphabet
ADJOINT = {"F": "Fdg", "Fdg": "F", "H": "H", "I": "I"}


def canonical_name(name: str) -> str:
    return ALIASES.get(name, name)


def is_universal(gate: Gate) -> bool:
    """Measurements and queries are always allowed; unitaries must be library members."""
    return gate.kind != UNITARY or gate.name in UNIVERSAL


__all__ = [
    "ADJOINT", "Gate", "GateError", "LIBRARY", "LiteralError", "MEASURE", "QUERY",
    "UNITARY", "UNIVERSAL", "UnitaryMatrix", "canonical_name", "is_universal",
    "matrix_entry_bits", "numeric_unitarity_error", "unitarity_check",
]
