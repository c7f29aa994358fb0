"""Reference simulator: unnormalized per-branch state vectors.

Two modes share one traversal:

* exact: amplitudes are Gaussian integers over a common denominator
  5^f * sqrt(2)^h (universal-library programs only); branch probabilities are
  exact rationals.
* general: complex128 amplitudes for arbitrary gate matrices.

Basis index convention: qubit j is bit (s - 1 - j) of the index, so qubit 0 is
the most significant bit and matches the first axis of ``reshape((2,) * s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qcountsim.core.gates import LIBRARY, MEASURE, QUERY, UNITARY, Gate
from qcountsim.core.gaussian import ExactAmplitude, GaussianInt
from qcountsim.program.model import (
    Apply,
    BranchingProgram,
    IfInput,
    Measure,
    ProgramError,
    Verdict,
    input_bit,
)

EXACT = "exact"
GENERAL = "general"
DEFAULT_MAX_BRANCHES = 1 << 20


class SimulationError(RuntimeError):
    pass


class BranchLimitError(SimulationError):
    pass


@dataclass
class StateVector:
    """Per-branch amplitude vector over 2^width basis states.

    Exact mode keeps the numerators in ``re``/``im`` (lists of ints) with a shared
    denominator 5^f * sqrt(2)^h. General mode keeps ``amps`` as a complex array.
    """

    width: int
    mode: str
    re: list | None = None
    im: list | None = None
    f: int = 0
    h: int = 0
    amps: np.ndarray | None = None

    @classmethod
    def zero(cls, width: int, mode: str = EXACT) -> StateVector:
        n = 1 << width
        if mode == EXACT:
            re = [0] * n
            re[0] = 1
            return cls(width, EXACT, re, [0] * n)
        amps = np.zeros(n, dtype=complex)
        amps[0] = 1.0
        return cls(width, GENERAL, amps=amps)

    def copy(self) -> StateVector:
        if self.mode == EXACT:
            return StateVector(self.width, EXACT, list(self.re), list(self.im), self.f, self.h)
        return StateVector(self.width, GENERAL, amps=self.amps.copy())

    def numerators(self) -> list[GaussianInt]:
        return [GaussianInt(a, b) for a, b in zip(self.re, self.im)]

    def amplitudes(self) -> list[ExactAmplitude]:
        return [ExactAmplitude(g, self.f, self.h) for g in self.numerators()]

    def norm_sq(self):
        """Squared 2-norm: exact rational in exact mode, float otherwise."""
        if self.mode == EXACT:
            total = sum(a * a + b * b for a, b in zip(self.re, self.im))
            return Fraction(total, 25**self.f * 2**self.h)
        return float(np.vdot(self.amps, self.amps).real)

    def to_numpy(self) -> np.ndarray:
        if self.mode == GENERAL:
            return self.amps.copy()
        scale = 5.0**self.f * 2.0 ** (self.h / 2)
        return np.array([complex(a, b) / scale for a, b in zip(self.re, self.im)])


def _bit(width, q):
    return 1 << (width - 1 - q)


def _query_flip(state_width, gate: Gate, x: str):
    """Basis permutation |i>|b> -> |i>|b xor x_{i+1}>; address read MSB first."""
    tbit = _bit(state_width, gate.target)
    perm = list(range(1 << state_width))
    for sigma in perm[:]:
        addr = 0
        for q in gate.address:
            addr = (addr << 1) | bool(sigma & _bit(state_width, q))
        if input_bit(x, addr + 1):
            perm[sigma] = sigma ^ tbit
    return perm


def _cnot_perm(width, control, target):
    cbit, tbit = _bit(width, control), _bit(width, target)
    return [s ^ tbit if s & cbit else s for s in range(1 << width)]


def apply_gate(state: StateVector, gate: Gate, x: str = "", matrices=None) -> StateVector:
    """Apply a unitary or query gate, returning a new state."""
    if gate.kind == MEASURE:
        raise SimulationError("measurements are handled by branch enumeration")
    w = state.width
    if gate.kind == QUERY:
        return _permute(state, _query_flip(w, gate, x))
    if state.mode == EXACT:
        return _apply_exact(state, gate)
    m = (matrices or {}).get(gate.name)
    if m is None:
        m = LIBRARY.get(gate.name)
    if m is None:
        raise SimulationError(f"no matrix for gate {gate.name!r}")
    return _apply_matrix(state, m.to_numpy() if hasattr(m, "to_numpy") else np.asarray(m), gate.qubits)


def _permute(state, perm):
    out = state.copy()
    if state.mode == EXACT:
        for s, d in enumerate(perm):
            out.re[d] = state.re[s]
            out.im[d] = state.im[s]
    else:
        out.amps[perm] = state.amps
    return out


def _apply_exact(state: StateVector, gate: Gate) -> StateVector:
    name, w = gate.name, state.width
    if name == "I":
        return state.copy()
    if name == "CNOT":
        return _permute(state, _cnot_perm(w, *gate.qubits))
    bit = _bit(w, gate.qubits[0])
    re, im = list(state.re), list(state.im)
    if name == "H":
        for s0 in range(1 << w):
            if s0 & bit:
                continue
            s1 = s0 | bit
            re[s0], re[s1] = state.re[s0] + state.re[s1], state.re[s0] - state.re[s1]
            im[s0], im[s1] = state.im[s0] + state.im[s1], state.im[s0] - state.im[s1]
        return StateVector(w, EXACT, re, im, state.f, state.h + 1)
    if name in ("F", "Fdg"):
        b = 4 if name == "F" else -4
        for s in range(1 << w):
            a_re, a_im = state.re[s], state.im[s]
            if s & bit:
                # (a_re + i a_im)(3 + i b)
                re[s], im[s] = 3 * a_re - b * a_im, b * a_re + 3 * a_im
            else:
                re[s], im[s] = 5 * a_re, 5 * a_im
        return StateVector(w, EXACT, re, im, state.f + 1, state.h)
    raise SimulationError(f"exact mode needs a universal-library gate, got {name!r}")


def _apply_matrix(state: StateVector, mat: np.ndarray, qubits) -> StateVector:
    k = len(qubits)
    psi = state.amps.reshape((2,) * state.width)
    op = mat.reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return StateVector(state.width, GENERAL, amps=np.ascontiguousarray(psi).reshape(-1))


def project(state: StateVector, qubit: int, outcome: int) -> StateVector:
    """Unnormalized projection onto qubit == outcome."""
    bit = _bit(state.width, qubit)
    keep = [bool(s & bit) == bool(outcome) for s in range(1 << state.width)]
    out = state.copy()
    if state.mode == EXACT:
        for s, k in enumerate(keep):
            if not k:
                out.re[s] = out.im[s] = 0
    else:
        out.amps[~np.array(keep)] = 0
    return out


@dataclass(frozen=True)
class BranchOutcome:
    mu: tuple[int, ...]
    p: Fraction | float
    accept: bool
    err: float = 0.0

    @property
    def verdict(self) -> str:
        return "accept" if self.accept else "reject"

    def record(self) -> dict:
        mu = "".join(map(str, self.mu))
        if isinstance(self.p, Fraction):
            return {"mu": mu, "p_num": str(self.p.numerator), "p_den": str(self.p.denominator),
                    "verdict": self.verdict}
        return {"mu": mu, "p": self.p, "err": self.err, "verdict": self.verdict}


def _mode_for(p: BranchingProgram, mode: str | None):
    if mode is not None:
        return mode
    from qcountsim.core.gates import is_universal

    return EXACT if all(is_universal(g) for path in p.paths() for g in path.gates) else GENERAL


def enumerate_branches(p: BranchingProgram, x: str = "", mode: str | None = None,
                       max_branches: int = DEFAULT_MAX_BRANCHES) -> list[BranchOutcome]:
    """Depth-first walk over measurement outcomes without renormalizing.

    Zero-probability branches are reported too.
    """
    mode = _mode_for(p, mode)
    results: list[BranchOutcome] = []
    stack = [(p.body, StateVector.zero(p.num_qubits, mode), (), 0)]
    while stack:
        block, state, mu, steps = stack.pop()
        for ins in block:
            if isinstance(ins, Apply):
                state = apply_gate(state, ins.gate, x, p.gates)
                steps += 1
            elif isinstance(ins, Measure):
                # push outcome 1 first so outcome 0 is explored first
                for outcome in (1, 0):
                    arm = ins.one if outcome else ins.zero
                    stack.append((arm, project(state, ins.qubit, outcome), mu + (outcome,), steps + 1))
                break
            elif isinstance(ins, IfInput):
                stack.append((ins.one if input_bit(x, ins.index) else ins.zero, state, mu, steps))
                break
            elif isinstance(ins, Verdict):
                if len(results) >= max_branches:
                    raise BranchLimitError(f"more than {max_branches} outcome branches")
                pr = state.norm_sq()
                err = 0.0 if mode == EXACT else float(64 * (steps + 1) * np.finfo(float).eps)
                results.append(BranchOutcome(mu, pr, ins.accept, err))
                break
        else:
            raise ProgramError("path ends without a verdict")
    return results


def accept_probability(p: BranchingProgram, x: str = "", mode: str | None = None,
                       max_branches: int = DEFAULT_MAX_BRANCHES):
    """Sum of p_mu over accepting branches (exact rational in exact mode)."""
    branches = enumerate_branches(p, x, mode, max_branches)
    exact = all(isinstance(b.p, Fraction) for b in branches)
    return sum((b.p for b in branches if b.accept), Fraction(0) if exact else 0.0)
