"""Level-wise path counting over the computation tree.

Each tree node carries a basis state sigma and a numerator alpha in
{1, -1, i, -i}. The gate applied at a level depends only on the outcome
history, so nodes with equal (sigma, alpha) have identical subtrees and it is
enough to track how many nodes share each (sigma, alpha). Children per gate:

* H on qubit j: two children, sigma_j set to 0 and to 1; the sigma_j = 1 child
  of a node with sigma_j = 1 gets -alpha.
* F (F†) on qubit j: if sigma_j = 1, three children keep alpha and four get
  i*alpha (-i*alpha); if sigma_j = 0, five children keep alpha.
* I, CNOT, query, measurement: one child. A measurement child survives only if
  sigma_j equals the next outcome bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from qcountsim.core.gates import MEASURE, QUERY, Gate
from qcountsim.core.gaussian import GaussianInt
from qcountsim.pathcount import backend as _backend
from qcountsim.program.model import (
    Apply,
    BranchingProgram,
    IfInput,
    Measure,
    OutcomeHistory,
    ProgramError,
    Verdict,
    input_bit,
)
from qcountsim.program.passes import gate_profile
from qcountsim.statevec import _cnot_perm, _query_flip


class CountVector(NamedTuple):
    """Node counts for numerators 1, -1, i, -i."""

    one: int = 0
    minus_one: int = 0
    i: int = 0
    minus_i: int = 0

    def amplitude(self) -> GaussianInt:
        """Sum of alpha over the counted nodes."""
        return GaussianInt(self.one - self.minus_one, self.i - self.minus_i)


def path_gates(p: BranchingProgram, x: str, mu) -> tuple[list[Gate], bool]:
    """Gate sequence and verdict for the complete outcome history ``mu``."""
    mu = OutcomeHistory.of(mu).bits
    gates: list[Gate] = []
    used = 0
    block = p.body
    while True:
        for ins in block:
            if isinstance(ins, Apply):
                gates.append(ins.gate)
            elif isinstance(ins, Measure):
                gates.append(ins.gate)
                if used == len(mu):
                    raise ProgramError(f"outcome sequence {mu} is shorter than the path")
                block = ins.one if mu[used] else ins.zero
                used += 1
                break
            elif isinstance(ins, IfInput):
                block = ins.one if input_bit(x, ins.index) else ins.zero
                break
            elif isinstance(ins, Verdict):
                if used != len(mu):
                    raise ProgramError(f"outcome sequence {mu} is longer than the path ({used})")
                return gates, ins.accept


def run_counts(p: BranchingProgram, x: str, gates, mu, kernels=None):
    """Advance the count table through ``gates``; returns rows as Python ints."""
    kern = kernels or _backend.ACTIVE
    width = p.num_qubits
    table = kern.new_table(1 << width)
    bound = 1
    outcomes = iter(mu)
    for g in gates:
        if kern.CAPACITY is not None and bound * 7 >= kern.CAPACITY:
            # the running bound is loose; fall back only if the table really is near the cap
            bound = max(kern.max_entry(table), 1)
            if bound * 7 >= kern.CAPACITY:
                table = _backend.pure.from_rows(kern.to_rows(table))
                kern = _backend.pure
        if g.kind == MEASURE:
            table = kern.measure_step(table, 1 << (width - 1 - g.qubits[0]), next(outcomes))
        elif g.kind == QUERY:
            table = kern.permute_step(table, _query_flip(width, g, x))
        elif g.name == "H":
            table = kern.h_step(table, 1 << (width - 1 - g.qubits[0]))
            bound *= 2
        elif g.name in ("F", "Fdg"):
            table = kern.f_step(table, 1 << (width - 1 - g.qubits[0]), g.name == "Fdg")
            bound *= 7
        elif g.name == "CNOT":
            table = kern.permute_step(table, _cnot_perm(width, *g.qubits))
        elif g.name == "I":
            pass
        else:
            raise ProgramError(f"path counting needs the universal library, got {g.name!r}")
    return kern.to_rows(table)


def count_paths(p: BranchingProgram, x: str, mu, kernels=None) -> dict[int, CountVector]:
    """Map sigma -> counts |V_{t,mu,sigma,alpha}| for the complete history ``mu``.

    Basis states with no surviving nodes are omitted.
    """
    prof = gate_profile(p, x)
    mu = OutcomeHistory.of(mu).bits
    if len(mu) != prof.m:
        raise ProgramError(f"outcome sequence has length {len(mu)}, program measures {prof.m} times")
    gates, _ = path_gates(p, x, mu)
    rows = run_counts(p, x, gates, mu, kernels)
    return {s: CountVector(*r) for s, r in enumerate(rows) if any(r)}


def branch_probability(counts: dict[int, CountVector], f: int, h: int) -> Fraction:
    total = sum(CountVector(*c).amplitude().norm_sq() for c in counts.values())
    return Fraction(total, 25**f * 2**h)


def m_plus_minus(c) -> tuple[int, int]:
    """(sum_alpha c_alpha^2, sum_alpha c_alpha * c_{-alpha})."""
    c1, cm1, ci, cmi = c
    return c1 * c1 + cm1 * cm1 + ci * ci + cmi * cmi, 2 * c1 * cm1 + 2 * ci * cmi
