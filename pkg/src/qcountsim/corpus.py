"""Seeded random universal-library programs for cross-checking the two simulators."""

from __future__ import annotations

import random
from dataclasses import dataclass

from qcountsim.core.gates import Gate
from qcountsim.program.model import Apply, BranchingProgram, IfInput, Measure, Verdict
from qcountsim.program.passes import gate_profile, normalize

SINGLE = ("F", "Fdg", "H", "I")


@dataclass(frozen=True)
class CorpusBounds:
    max_qubits: int = 5
    max_gates: int = 14
    max_measurements: int = 3
    max_input: int = 3


def _random_gate(rng: random.Random, s: int, n: int) -> Gate:
    choices = ["CNOT", "F", "Fdg", "H", "I"]
    if n > 0 and s >= 2:
        choices.append("QUERY")
    kind = rng.choice(choices)
    if kind == "CNOT":
        if s < 2:
            return Gate.unitary("H", 0) if rng.random() < 0.5 else Gate.unitary("F", 0)
        a, b = rng.sample(range(s), 2)
        return Gate.unitary("CNOT", a, b)
    if kind == "QUERY":
        qs = rng.sample(range(s), rng.randint(2, min(s, 3)))
        return Gate.query(qs[:-1], qs[-1])
    return Gate.unitary(kind, rng.randrange(s))


def _random_block(rng, s, n, t_left, m_left, branches_left=2):
    out = []
    length = rng.randint(0, t_left)
    for _ in range(length):
        out.append(Apply(_random_gate(rng, s, n)))
    t_left -= length
    roll = rng.random()
    if m_left > 0 and t_left > 0 and roll < 0.7:
        q = rng.randrange(s)
        out.append(Measure(q, _random_block(rng, s, n, t_left - 1, m_left - 1, branches_left),
                           _random_block(rng, s, n, t_left - 1, m_left - 1, branches_left)))
    elif n > 0 and branches_left > 0 and roll < 0.8:
        # index n + 1 exercises the out-of-range read
        out.append(IfInput(rng.randint(1, n + 1),
                           _random_block(rng, s, n, t_left, m_left, branches_left - 1),
                           _random_block(rng, s, n, t_left, m_left, branches_left - 1)))
    else:
        out.append(Verdict(rng.random() < 0.5))
    return tuple(out)


def random_program(rng: random.Random, bounds: CorpusBounds = CorpusBounds(),
                   normalized: bool = True) -> BranchingProgram:
    """A random program whose normalized form satisfies ``bounds``."""
    while True:
        s = rng.randint(1, max(1, bounds.max_qubits - 2))
        n = rng.randint(0, bounds.max_input)
        t_budget = rng.randint(1, max(1, bounds.max_gates - 4))
        body = _random_block(rng, s, n, t_budget, bounds.max_measurements)
        p = BranchingProgram(s, n, body)
        p.validate()
        if not normalized:
            return p
        q = normalize(p)
        if q.num_qubits > bounds.max_qubits:
            continue
        x = random_input(rng, n)
        prof = gate_profile(q, x)
        if prof.t <= bounds.max_gates and prof.m <= bounds.max_measurements:
            return q


def random_input(rng: random.Random, n: int) -> str:
    return "".join(rng.choice("01") for _ in range(n))


NON_UNIVERSAL = ("X", "Y", "Z", "S", "T", "Tdg", "SWAP", "CZ")


def random_general_program(rng: random.Random, num_qubits: int = 3, max_gates: int = 6,
                           max_measurements: int = 2, custom_dims=(2, 4)) -> BranchingProgram:
    """A random program mixing the universal set, other library gates and
    Haar-random custom gates of the given dimensions."""
    import numpy as np

    from qcountsim.core.gates import UnitaryMatrix
    from qcountsim.core.linalg import random_unitary

    nrng = np.random.default_rng(rng.getrandbits(32))
    gates: dict = {}

    def gate():
        roll = rng.random()
        if roll < 0.4:
            dim = rng.choice([d for d in custom_dims if d.bit_length() - 1 <= num_qubits])
            name = f"G{len(gates)}"
            gates[name] = UnitaryMatrix.from_array(random_unitary(nrng, dim), name)
            k = dim.bit_length() - 1
        else:
            pool = [g for g in NON_UNIVERSAL + SINGLE + ("CNOT",)
                    if num_qubits >= 2 or g not in ("SWAP", "CZ", "CNOT")]
            name = rng.choice(pool)
            k = 2 if name in ("SWAP", "CZ", "CNOT") else 1
        return Gate.unitary(name, *rng.sample(range(num_qubits), k))

    def block(t_left, m_left, last):
        n = rng.randint(1, max(1, t_left))
        out = [Apply(gate()) for _ in range(n)]
        if m_left and (last is None or rng.random() < 0.6):
            q = rng.randrange(num_qubits)
            out.append(Measure(q, block(t_left - n, m_left - 1, 0),
                               block(t_left - n, m_left - 1, 1)))
        else:
            # accept on a last outcome of 0 keeps acceptance nontrivial
            out.append(Verdict(last == 0))
        return tuple(out)

    body = block(max_gates, max(1, max_measurements), None)
    p = BranchingProgram(num_qubits, 0, body, gates)
    p.validate()
    return p
