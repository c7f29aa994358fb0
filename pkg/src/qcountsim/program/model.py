"""Classically-controlled gate programs.

A program body is a block: a tuple of instructions whose last element is a
terminal (``Measure``, ``IfInput`` or ``Verdict``). Measurements and input
branches carry one successor block per outcome, so programs are finite trees
and every path ends in a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from qcountsim.core.gates import LIBRARY, MEASURE, QUERY, UNITARY, Gate, GateError, UnitaryMatrix


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Apply:
    gate: Gate


@dataclass(frozen=True)
class Measure:
    qubit: int
    zero: tuple
    one: tuple

    @property
    def gate(self) -> Gate:
        return Gate.measure(self.qubit)


@dataclass(frozen=True)
class IfInput:
    index: int  # 1-based
    zero: tuple
    one: tuple


@dataclass(frozen=True)
class Verdict:
    accept: bool


Instruction = Union[Apply, Measure, IfInput, Verdict]
Block = tuple


def input_bit(x: str, i: int) -> int:
    """x_i with 1-based indexing; out-of-range positions read as 0."""
    return int(x[i - 1]) if 1 <= i <= len(x) else 0


@dataclass(frozen=True)
class BranchingProgram:
    num_qubits: int
    input_length: int
    body: Block
    gates: dict = field(default_factory=dict, compare=False)

    def matrix(self, name: str) -> UnitaryMatrix:
        if name in self.gates:
            return self.gates[name]
        if name in LIBRARY:
            return LIBRARY[name]
        raise ProgramError(f"unknown gate {name!r}")

    def validate(self):
        _validate_block(self, self.body, ())

    def paths(self, x: str | None = None) -> Iterator[Path]:
        """Every root-to-verdict path.

        With ``x`` given, input branches are resolved; otherwise both arms of every
        input branch are followed.
        """
        yield from _paths(self.body, x, (), (), ())


@dataclass(frozen=True)
class Path:
    gates: tuple[Gate, ...]
    mu: tuple[int, ...]
    accept: bool
    inputs: tuple[tuple[int, int], ...] = ()


def _paths(block, x, gates, mu, inputs):
    gates = list(gates)
    for pos, ins in enumerate(block):
        if isinstance(ins, Apply):
            gates.append(ins.gate)
        elif isinstance(ins, Measure):
            gates.append(ins.gate)
            yield from _paths(ins.zero, x, gates, mu + (0,), inputs)
            yield from _paths(ins.one, x, gates, mu + (1,), inputs)
            return
        elif isinstance(ins, IfInput):
            if x is None:
                yield from _paths(ins.zero, x, gates, mu, inputs + ((ins.index, 0),))
                yield from _paths(ins.one, x, gates, mu, inputs + ((ins.index, 1),))
            else:
                arm = ins.one if input_bit(x, ins.index) else ins.zero
                yield from _paths(arm, x, gates, mu, inputs)
            return
        elif isinstance(ins, Verdict):
            yield Path(tuple(gates), mu, ins.accept, inputs)
            return
    raise ProgramError("path ends without a verdict")


def _validate_block(p: BranchingProgram, block, where):
    if not block:
        raise ProgramError(f"empty block at {where or 'top level'}")
    for pos, ins in enumerate(block):
        last = pos == len(block) - 1
        if isinstance(ins, Apply):
            g = ins.gate
            try:
                g.validate(p.num_qubits)
            except GateError as exc:
                raise ProgramError(str(exc)) from exc
            if g.kind == UNITARY:
                m = p.matrix(g.name)
                if m.num_qubits != len(g.qubits):
                    raise ProgramError(f"{g}: gate acts on {m.num_qubits} qubit(s)")
            elif g.kind == QUERY and not g.address:
                raise ProgramError(f"{g}: query needs at least one address qubit")
            elif g.kind == MEASURE:
                raise ProgramError("measurements must use the Measure instruction")
            if last:
                raise ProgramError("path ends without a verdict")
        elif isinstance(ins, (Measure, IfInput)):
            if isinstance(ins, Measure) and not 0 <= ins.qubit < p.num_qubits:
                raise ProgramError(f"measured qubit {ins.qubit} outside register")
            if isinstance(ins, IfInput) and ins.index < 1:
                raise ProgramError("input indices are 1-based")
            if not last:
                raise ProgramError("instructions after a branching statement")
            _validate_block(p, ins.zero, where + (0,))
            _validate_block(p, ins.one, where + (1,))
        elif isinstance(ins, Verdict):
            if not last:
                raise ProgramError("instructions after a verdict")
        else:
            raise ProgramError(f"unknown instruction {ins!r}")


@dataclass(frozen=True)
class OutcomeHistory:
    bits: tuple[int, ...] = ()

    @classmethod
    def of(cls, bits) -> OutcomeHistory:
        if isinstance(bits, OutcomeHistory):
            return bits
        if isinstance(bits, str):
            bits = [int(b) for b in bits]
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("outcome bits must be 0 or 1")
        return cls(bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join(map(str, self.bits))


def gate_at(p: BranchingProgram, x: str, mu, tau: int):
    """The ``tau``-th gate (1-based) applied when history ``mu`` has been observed.

    ``mu`` must be exactly the outcomes of the measurements preceding step ``tau``.
    Returns a :class:`Gate`, or a :class:`Verdict` when ``tau`` is one past the end
    of the path.
    """
    if tau < 1:
        raise ProgramError("step index is 1-based")
    mu = OutcomeHistory.of(mu).bits
    used = 0
    step = 0
    block = p.body
    while True:
        for ins in block:
            if isinstance(ins, Apply):
                step += 1
                if step == tau:
                    return _check_consumed(ins.gate, used, mu)
            elif isinstance(ins, Measure):
                step += 1
                if step == tau:
                    return _check_consumed(ins.gate, used, mu)
                if used == len(mu):
                    raise ProgramError(f"history {mu} too short to reach step {tau}")
                block = ins.one if mu[used] else ins.zero
                used += 1
                break
            elif isinstance(ins, IfInput):
                block = ins.one if input_bit(x, ins.index) else ins.zero
                break
            elif isinstance(ins, Verdict):
                if step + 1 == tau:
                    return _check_consumed(ins, used, mu)
                raise ProgramError(f"step {tau} exceeds the path length {step}")


def _check_consumed(result, used, mu):
    if used != len(mu):
        raise ProgramError(f"history {mu} inconsistent: only {used} measurement(s) precede this step")
    return result
