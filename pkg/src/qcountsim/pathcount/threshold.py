"""Acceptance as a difference of two path counts compared with a threshold."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from qcountsim.pathcount.counting import CountVector, branch_probability, m_plus_minus, run_counts
from qcountsim.program.model import BranchingProgram
from qcountsim.program.passes import NotNormalizedError, gate_profile
from qcountsim.statevec import DEFAULT_MAX_BRANCHES, BranchLimitError

GROUP_BITS = 6
GROUP_LIMIT = 25


@dataclass(frozen=True)
class CountedBranch:
    mu: tuple[int, ...]
    accept: bool
    counts: dict
    p: Fraction


def count_branches(p: BranchingProgram, x: str = "", kernels=None,
                   max_branches: int = DEFAULT_MAX_BRANCHES) -> list[CountedBranch]:
    """Path counts and reconstructed p_mu for every complete outcome history."""
    prof = gate_profile(p, x)
    out = []
    for path in p.paths(x):
        if len(out) >= max_branches:
            raise BranchLimitError(f"more than {max_branches} outcome branches")
        rows = run_counts(p, x, path.gates, path.mu, kernels)
        counts = {s: CountVector(*r) for s, r in enumerate(rows) if any(r)}
        out.append(CountedBranch(path.mu, path.accept, counts,
                                 branch_probability(counts, prof.f, prof.h)))
    return out


def n_totals(p: BranchingProgram, x: str = "", kernels=None,
             max_branches: int = DEFAULT_MAX_BRANCHES) -> tuple[int, int]:
    """(#N+, #N-): sums of #M+ and #M- over accepting histories and all basis states."""
    n_plus = n_minus = 0
    for b in count_branches(p, x, kernels, max_branches):
        if not b.accept:
            continue
        for c in b.counts.values():
            mp, mm = m_plus_minus(c)
            n_plus += mp
            n_minus += mm
    return n_plus, n_minus


def guess_budget(n_plus: int, n_minus: int, f: int = 0, h: int = 1) -> int:
    """Smallest g >= 1 with 2^g >= max(#N+, #N-) that also fits the dummy-path layout."""
    top = max(n_plus, n_minus, 1)
    return max(1, (top - 1).bit_length(), h - 1 + GROUP_BITS * f)


@dataclass(frozen=True)
class ThresholdReport:
    n_plus: int
    n_minus: int
    f: int
    h: int
    g: int
    threshold: int
    accept_fraction: Fraction
    accept: bool
    tie: bool

    @property
    def verdict(self) -> str:
        return "accept" if self.accept else "reject"

    def record(self) -> dict:
        return {
            "n_plus": str(self.n_plus),
            "n_minus": str(self.n_minus),
            "f": self.f,
            "h": self.h,
            "g": self.g,
            "threshold": str(self.threshold),
            "accept_fraction_num": str(self.accept_fraction.numerator),
            "accept_fraction_den": str(self.accept_fraction.denominator),
            "verdict": self.verdict,
            "tie": self.tie,
        }


def threshold_decide(p: BranchingProgram, x: str = "", kernels=None,
                     max_branches: int = DEFAULT_MAX_BRANCHES, n_counts=None) -> ThresholdReport:
    """Accept iff #N+ - #N- > 25^f * 2^(h-1); ties (probability exactly 1/2) reject.

    ``accept_fraction`` is the acceptance probability of the combined machine:
    a chooser bit runs N+ or a flipped N-, and the other half of the paths are
    the dummy gadget, giving (#N+ - #N- + 2^(g+1) - threshold) / 2^(g+2).
    """
    prof = gate_profile(p, x)
    if prof.h < 1:
        raise NotNormalizedError("threshold decision needs h >= 1; normalize the program first")
    n_plus, n_minus = n_counts if n_counts is not None else n_totals(p, x, kernels, max_branches)
    g = guess_budget(n_plus, n_minus, prof.f, prof.h)
    threshold = 25**prof.f * 2 ** (prof.h - 1)
    diff = n_plus - n_minus
    frac = Fraction(diff + 2 ** (g + 1) - threshold, 2 ** (g + 2))
    return ThresholdReport(n_plus, n_minus, prof.f, prof.h, g, threshold, frac,
                           diff > threshold, diff == threshold)


# ------------------------------------------------------------ dummy gadget

def _check_layout(f, h, g):
    if h < 1:
        raise ValueError("the dummy gadget needs h >= 1")
    if f < 0 or g < 0:
        raise ValueError("f and g must be nonnegative")
    if g < h - 1 + GROUP_BITS * f:
        raise ValueError(f"g={g} too small for h-1 free bits and {f} six-bit groups")


def dummy_path_counts(f: int, h: int, g: int) -> tuple[int, int]:
    """(accepting, rejecting) among the 2^(g+1) guess strings of the gadget.

    Counts field by field: leading bit, h-1 ignored bits, f six-bit groups
    (a value >= 25 accepts), then the remaining bits (all zero rejects).
    """
    _check_layout(f, h, g)
    rejecting = 2**g  # leading bit 0
    accepting = 0
    alive = 2 ** (h - 1)  # leading 1, any ignored bits
    left = g - (h - 1)
    for _ in range(f):
        left -= GROUP_BITS
        # a group >= 25 accepts whatever the later bits are
        accepting += alive * (2**GROUP_BITS - GROUP_LIMIT) * 2**left
        alive *= GROUP_LIMIT
    rejecting += alive  # remaining bits all zero
    accepting += alive * (2**left - 1)
    assert accepting + rejecting == 2 ** (g + 1)
    return accepting, rejecting


def enumerate_dummy_paths(f: int, h: int, g: int) -> tuple[int, int]:
    """(accepting, rejecting) by running the gadget on every guess string."""
    _check_layout(f, h, g)
    n = g + 1
    strings = np.arange(1 << n, dtype=np.int64)

    def field(start, width):
        # bits [start, start+width) counted from the most significant end
        shift = n - start - width
        return (strings >> shift) & ((1 << width) - 1)

    lead = field(0, 1)
    accept = np.zeros(strings.shape, dtype=bool)
    pos = 1 + (h - 1)
    for _ in range(f):
        accept |= field(pos, GROUP_BITS) >= GROUP_LIMIT
        pos += GROUP_BITS
    rest_width = n - pos
    rest_zero = field(pos, rest_width) == 0 if rest_width else np.ones(strings.shape, dtype=bool)
    accept |= ~rest_zero
    accept &= lead == 1
    acc = int(accept.sum())
    return acc, (1 << n) - acc
