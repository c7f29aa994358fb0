"""Padding pass and the (t, s, m, f, h, g) profile of a program."""

from __future__ import annotations

from dataclasses import dataclass

from qcountsim.core.gates import MEASURE, UNITARY, Gate, is_universal
from qcountsim.program.model import (
    Apply,
    BranchingProgram,
    IfInput,
    Measure,
    ProgramError,
    Verdict,
)


class NotNormalizedError(ProgramError):
    pass


@dataclass(frozen=True)
class ProgramProfile:
    t: int
    s: int
    m: int
    f: int
    h: int
    g: int | None = None


def _gate_stats(gates):
    t = len(gates)
    m = sum(g.kind == MEASURE for g in gates)
    f = sum(g.kind == UNITARY and g.name in ("F", "Fdg") for g in gates)
    h = sum(g.kind == UNITARY and g.name == "H" for g in gates)
    return t, m, f, h


def normalize(p: BranchingProgram) -> BranchingProgram:
    """Pad every path to the same (t, m, f, h), with h >= 1.

    Padding is appended before each verdict and never changes the probability of
    an original outcome history:

    * extra measurements read a fresh ancilla held at |0>; their outcome-1 arm
      is unreachable and rejects,
    * F gates act on that same |0> ancilla (F|0> = |0>),
    * H gates act on a second ancilla that is never measured,
    * I gates on qubit 0 make up the remaining length.
    """
    stats = []
    for path in p.paths():
        for g in path.gates:
            if not is_universal(g):
                raise ProgramError(f"gate {g.name!r} is outside {{CNOT, F, F†, H, I}}; compile first")
        stats.append(_gate_stats(path.gates))
    max_m = max(s[1] for s in stats)
    max_f = max(s[2] for s in stats)
    max_h = max(s[3] for s in stats)
    target_h = max_h if max_h >= 1 else 2
    needs_zero = any(m < max_m or f < max_f for _, m, f, _ in stats)
    needs_h = any(h < target_h for *_, h in stats)
    total = max(t + (max_m - m) + (max_f - f) + (target_h - h) for t, m, f, h in stats)
    if not needs_zero and not needs_h and all(s[0] == total for s in stats):
        return p

    width = p.num_qubits
    zero_anc = h_anc = None
    if needs_zero:
        zero_anc, width = width, width + 1
    if needs_h:
        h_anc, width = width, width + 1

    def tail(dm, df, dh, dt, accept):
        if dm:
            return (Measure(zero_anc,
                            tail(dm - 1, df, dh, dt, accept),
                            tail(dm - 1, df, dh, dt, False)),)
        out = [Apply(Gate.unitary("F", zero_anc)) for _ in range(df)]
        out += [Apply(Gate.unitary("H", h_anc)) for _ in range(dh)]
        out += [Apply(Gate.unitary("I", 0)) for _ in range(dt)]
        out.append(Verdict(accept))
        return tuple(out)

    def rebuild(block, t, m, f, h):
        out = []
        for ins in block:
            if isinstance(ins, Apply):
                t1, _, f1, h1 = _gate_stats((ins.gate,))
                t, f, h = t + t1, f + f1, h + h1
                out.append(ins)
            elif isinstance(ins, Measure):
                out.append(Measure(ins.qubit,
                                   rebuild(ins.zero, t + 1, m + 1, f, h),
                                   rebuild(ins.one, t + 1, m + 1, f, h)))
            elif isinstance(ins, IfInput):
                out.append(IfInput(ins.index, rebuild(ins.zero, t, m, f, h),
                                   rebuild(ins.one, t, m, f, h)))
            else:
                dm, df, dh = max_m - m, max_f - f, target_h - h
                dt = total - (t + dm + df + dh)
                out.extend(tail(dm, df, dh, dt, ins.accept))
        return tuple(out)

    body = rebuild(p.body, 0, 0, 0, 0)
    q = BranchingProgram(width, p.input_length, body, dict(p.gates))
    q.validate()
    return q


def gate_profile(p: BranchingProgram, x: str = "") -> ProgramProfile:
    """(t, s, m, f, h) after checking that every outcome history on ``x`` agrees."""
    seen = {_gate_stats(path.gates) for path in p.paths(x)}
    if len(seen) != 1:
        raise NotNormalizedError(f"outcome histories disagree on (t, m, f, h): {sorted(seen)}")
    t, m, f, h = seen.pop()
    return ProgramProfile(t, p.num_qubits, m, f, h)


def profile(p: BranchingProgram, x: str = "") -> ProgramProfile:
    """Full profile including the guess budget g derived from the path counts."""
    from qcountsim.pathcount.threshold import guess_budget, n_totals

    base = gate_profile(p, x)
    n_plus, n_minus = n_totals(p, x)
    return ProgramProfile(base.t, base.s, base.m, base.f, base.h,
                          guess_budget(n_plus, n_minus, base.f, base.h))
