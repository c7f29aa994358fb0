"""Exact comparison of the state-vector and path-counting simulators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from qcountsim.pathcount.counting import CountVector, branch_probability
from qcountsim.pathcount.threshold import count_branches
from qcountsim.program.model import BranchingProgram
from qcountsim.program.passes import gate_profile, normalize
from qcountsim.statevec import EXACT, DEFAULT_MAX_BRANCHES, enumerate_branches


@dataclass
class Comparison:
    statevec: dict[tuple[int, ...], Fraction]
    pathcount: dict[tuple[int, ...], Fraction]
    accept: dict[tuple[int, ...], bool]
    mismatches: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def exact_match(self) -> bool:
        return not self.mismatches

    @property
    def verdict(self) -> str:
        return "exact-match" if self.exact_match else "mismatch"

    def accept_probability(self) -> Fraction:
        return sum((p for mu, p in self.statevec.items() if self.accept[mu]), Fraction(0))


def _inject(branches):
    """Bump one path count of the first branch with any surviving node."""
    for b in branches:
        for sigma, c in b.counts.items():
            c = CountVector(c.one + 1, *c[1:])
            b.counts[sigma] = c
            return b
    return None


def compare_backends(p: BranchingProgram, x: str = "", kernels=None,
                     max_branches: int = DEFAULT_MAX_BRANCHES,
                     inject_fault: bool = False) -> Comparison:
    """Every p_mu from both simulators as exact rationals; ``p`` is normalized first."""
    q = normalize(p)
    sv = {b.mu: b.p for b in enumerate_branches(q, x, EXACT, max_branches)}
    branches = count_branches(q, x, kernels, max_branches)
    if inject_fault:
        prof = gate_profile(q, x)
        hit = _inject(branches)
        if hit is not None:
            fixed = branch_probability(hit.counts, prof.f, prof.h)
            branches = [type(b)(b.mu, b.accept, b.counts, fixed) if b is hit else b for b in branches]
    pc = {b.mu: b.p for b in branches}
    accept = {b.mu: b.accept for b in branches}
    bad = sorted(mu for mu in set(sv) | set(pc) if sv.get(mu) != pc.get(mu))
    return Comparison(sv, pc, accept, bad)
