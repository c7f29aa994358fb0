"""Compile a program with arbitrary gates down to {CNOT, F, Fdg, H, I}."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qcountsim.core.gates import UNITARY, Gate, is_universal
from qcountsim.decompose import CircuitFragment, decompose_gate
from qcountsim.program.model import Apply, BranchingProgram, IfInput, Measure
from qcountsim.program.passes import normalize
from qcountsim.skcompile.distance import proj_distance
from qcountsim.skcompile.net import EpsilonNet, build_net
from qcountsim.skcompile.sk import MAX_DEPTH, sk_search
from qcountsim.skcompile.words import LETTER_MATRIX, GateWord

EXACT_MATCH = 1e-12


@dataclass(frozen=True)
class GateReport:
    gate: str
    qubits: tuple[int, ...]
    fragment_size: int
    ancillas: int
    word_lengths: tuple[int, ...]
    distances: tuple[float, ...]

    def record(self) -> dict:
        return {"gate": self.gate, "qubits": list(self.qubits),
                "fragment_size": self.fragment_size, "ancillas": self.ancillas,
                "word_lengths": list(self.word_lengths), "distances": list(self.distances)}


@dataclass
class CompileReport:
    program: BranchingProgram
    eps: float
    t_prime: int
    ancillas: int
    gates: list[GateReport] = field(default_factory=list)
    normalized: bool = False

    @property
    def error_budget(self) -> float:
        """2 * sum of per-gate errors along the longest path."""
        return 2 * self.t_prime * self.eps

    @property
    def max_distance(self) -> float:
        return max((d for g in self.gates for d in g.distances), default=0.0)

    def record(self) -> dict:
        return {"eps": self.eps, "t_prime": self.t_prime, "ancillas": self.ancillas,
                "normalized": self.normalized,
                "error_budget": self.error_budget, "max_distance": self.max_distance,
                "gates": [g.record() for g in self.gates]}


def _library_letter(m: np.ndarray) -> str | None:
    """'' for identity, a letter name for F, Fdg or H, up to phase; else None."""
    if proj_distance(m, np.eye(2)) < EXACT_MATCH:
        return ""
    for name, mat in LETTER_MATRIX.items():
        if proj_distance(m, mat) < EXACT_MATCH:
            return name
    return None


def _walk(block, fn):
    out = []
    for ins in block:
        if isinstance(ins, Apply):
            out.extend(fn(ins))
        elif isinstance(ins, Measure):
            out.append(Measure(ins.qubit, _walk(ins.zero, fn), _walk(ins.one, fn)))
        elif isinstance(ins, IfInput):
            out.append(IfInput(ins.index, _walk(ins.zero, fn), _walk(ins.one, fn)))
        else:
            out.append(ins)
    return tuple(out)


def decomposed_length(p: BranchingProgram, fragments: dict | None = None) -> int:
    """t': longest path length once every non-library gate is decomposed."""
    fragments = {} if fragments is None else fragments

    def size(g: Gate) -> int:
        if g.kind != UNITARY or is_universal(g):
            return 1
        if g.name not in fragments:
            fragments[g.name] = decompose_gate(p.matrix(g.name))
        return len(fragments[g.name])

    return max((sum(size(g) for g in path.gates) for path in p.paths()), default=0)


def compile_with_report(p: BranchingProgram, eps: float | None = None,
                        net: EpsilonNet | None = None, max_depth: int = MAX_DEPTH,
                        do_normalize: bool = True) -> CompileReport:
    """Decompose every non-library gate, then replace each single-qubit piece by
    an SK word within ``eps``; by default eps = 1/(20 t') where t' is the
    longest path length after decomposition."""
    p.validate()
    fragments: dict[str, CircuitFragment] = {}
    t_prime = decomposed_length(p, fragments)
    if eps is None:
        eps = 1 / (20 * max(t_prime, 1))
    if eps <= 0:
        raise ValueError("eps must be positive")
    anc = max((f.ancillas for f in fragments.values()), default=0)
    base = p.num_qubits
    words: dict[bytes, tuple[str, GateWord | None, float]] = {}
    reports: dict[tuple, GateReport] = {}

    def approximate(m: np.ndarray):
        key = np.round(m, 15).tobytes()
        if key not in words:
            letter = _library_letter(m)
            if letter is not None:
                words[key] = (letter, None, 0.0)
            else:
                nonlocal net
                net = net if net is not None else build_net()
                res = sk_search(m, eps, net, max_depth)
                words[key] = ("", res.word, res.distance)
        return words[key]

    def lower(ins: Apply):
        g = ins.gate
        if g.kind != UNITARY or is_universal(g):
            return [ins]
        frag = fragments[g.name]
        local = list(g.qubits) + [base + k for k in range(frag.ancillas)]
        out, lengths, dists = [], [], []
        for op in frag.ops:
            if op.is_cnot:
                out.append(Apply(Gate.unitary("CNOT", local[op.controls[0]], local[op.target])))
                continue
            q = local[op.target]
            letter, word, dist = approximate(op.matrix)
            if word is None:
                if letter:
                    out.append(Apply(Gate.unitary(letter, q)))
                lengths.append(1 if letter else 0)
            else:
                out.extend(Apply(Gate.unitary(a, q)) for a in word.circuit_order())
                lengths.append(len(word))
            dists.append(dist)
        key = (g.name, g.qubits)
        if key not in reports:
            reports[key] = GateReport(g.name, g.qubits, len(frag), frag.ancillas,
                                      tuple(lengths), tuple(dists))
        return out

    body = _walk(p.body, lower)
    q = BranchingProgram(base + anc, p.input_length, body, {})
    q.validate()
    padded = normalize(q) if do_normalize else q
    return CompileReport(padded, eps, t_prime, anc, list(reports.values()), padded is not q)


def compile_program(p: BranchingProgram, eps: float | None = None,
                    net: EpsilonNet | None = None) -> BranchingProgram:
    """The compiled program over {CNOT, F, Fdg, H, I}, normalized."""
    return compile_with_report(p, eps, net).program
