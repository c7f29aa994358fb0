"""Reader and writer for the line-oriented program language.

::

    qprog 1
    qubits 2
    input 3
    GATE V 2 sqrt(1/2) -sqrt(1/2) sqrt(1/2) sqrt(1/2)
    U H 0
    CNOT 0 1
    QUERY 0 -> 1
    IFINPUT 2 { 0: ACCEPT 1: U V 1; MEASURE 1 { 0: ACCEPT 1: REJECT } }

Statements may be separated by newlines or ``;``; ``#`` starts a comment.
Gate entry literals are whitespace-separated; whitespace inside parentheses is
allowed.
"""

from __future__ import annotations

import re

from qcountsim.core.gates import LIBRARY, Gate, GateError, UnitaryMatrix, canonical_name
from qcountsim.core.literals import LiteralError, parse_literal
from qcountsim.program.model import (
    Apply,
    BranchingProgram,
    IfInput,
    Measure,
    ProgramError,
    Verdict,
)


class DSLError(ProgramError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"->|[{}:]|-?\d+|[A-Za-z_][A-Za-z0-9_†]*")
_SKIP = re.compile(r"(?:\s|;|#[^\n]*)*")

TERMINALS = ("MEASURE", "IFINPUT", "ACCEPT", "REJECT")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        return DSLError(message, *self.where(pos))

    def skip(self):
        self.pos = _SKIP.match(self.text, self.pos).end()

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek(self):
        self.skip()
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            if self.pos >= len(self.text):
                return None
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        return m.group(0)

    def next(self, what="a token"):
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {what}, found end of input")
        self.pos += len(tok)
        return tok

    def expect(self, value):
        start = self._start()
        tok = self.peek()
        if tok != value:
            raise self.error(f"expected {value!r}, found {tok!r}", start)
        self.pos += len(tok)

    def integer(self, what="an integer"):
        start = self._start()
        tok = self.next(what)
        if not re.fullmatch(r"-?\d+", tok):
            raise self.error(f"expected {what}, found {tok!r}", start)
        return int(tok)

    def literal(self):
        """One gate-entry literal: a whitespace-delimited run, parentheses balanced."""
        self.skip()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if depth == 0 and (ch.isspace() or ch in ";#"):
                break
            depth += ch == "("
            depth -= ch == ")"
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a matrix entry literal")
        return self.text[start:self.pos], start

    def _start(self):
        self.skip()
        return self.pos


def parse_program(text: str) -> BranchingProgram:
    sc = _Scanner(text)
    num_qubits = None
    input_length = 0
    gates: dict[str, UnitaryMatrix] = {}

    while True:
        tok = sc.peek()
        if tok == "qprog":
            sc.next()
            start = sc._start()
            if sc.integer("a format version") != 1:
                raise sc.error("unsupported format version", start)
        elif tok == "qubits":
            sc.next()
            start = sc._start()
            num_qubits = sc.integer("a qubit count")
            if num_qubits < 1:
                raise sc.error("a program needs at least one qubit", start)
        elif tok == "input":
            sc.next()
            start = sc._start()
            input_length = sc.integer("an input length")
            if input_length < 0:
                raise sc.error("input length must be nonnegative", start)
        elif tok == "GATE":
            _parse_gate_def(sc, gates)
        else:
            break
    if num_qubits is None:
        raise sc.error("missing 'qubits <s>' header")
    if sc.at_end():
        raise sc.error("program has no instructions")
    ctx = _Context(sc, num_qubits, gates)
    body = ctx.block()
    if not sc.at_end():
        raise sc.error(f"unexpected {sc.peek()!r} after the end of the program")
    p = BranchingProgram(num_qubits, input_length, body, gates)
    try:
        p.validate()
    except ProgramError as exc:
        raise sc.error(str(exc)) from exc
    return p


def _parse_gate_def(sc: _Scanner, gates):
    start = sc._start()
    sc.next()
    name_pos = sc._start()
    name = sc.next("a gate name")
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_†]*", name):
        raise sc.error(f"bad gate name {name!r}", name_pos)
    name = canonical_name(name)
    if name in LIBRARY or name in gates:
        raise sc.error(f"gate {name!r} is already defined", name_pos)
    dim_pos = sc._start()
    dim = sc.integer("a gate dimension")
    if dim < 2 or dim & (dim - 1):
        raise sc.error(f"gate dimension {dim} is not a power of two", dim_pos)
    entries = []
    for _ in range(dim * dim):
        lit, pos = sc.literal()
        try:
            entries.append(parse_literal(lit))
        except LiteralError as exc:
            raise sc.error(str(exc), pos) from exc
    try:
        gates[name] = UnitaryMatrix.from_literals(dim, entries, name)
    except GateError as exc:
        raise sc.error(str(exc), start) from exc


class _Context:
    def __init__(self, sc: _Scanner, num_qubits: int, gates):
        self.sc = sc
        self.num_qubits = num_qubits
        self.gates = gates

    def qubit(self):
        start = self.sc._start()
        q = self.sc.integer("a qubit index")
        if not 0 <= q < self.num_qubits:
            raise self.sc.error(f"qubit {q} out of range (register has {self.num_qubits})", start)
        return q

    def block(self):
        sc = self.sc
        out = []
        while True:
            start = sc._start()
            tok = sc.peek()
            if tok is None or tok == "}" or re.fullmatch(r"-?\d+", tok):
                raise sc.error("path ends without ACCEPT or REJECT", start)
            sc.next()
            if tok == "U":
                out.append(Apply(self.unitary(sc.next("a gate name"), start)))
            elif tok in ("CNOT", "CX"):
                out.append(Apply(self.unitary_args("CNOT", start)))
            elif tok == "QUERY":
                out.append(Apply(self.query(start)))
            elif tok == "ACCEPT":
                out.append(Verdict(True))
                return tuple(out)
            elif tok == "REJECT":
                out.append(Verdict(False))
                return tuple(out)
            elif tok == "MEASURE":
                q = self.qubit()
                zero, one = self.arms("MEASURE")
                out.append(Measure(q, zero, one))
                return tuple(out)
            elif tok == "IFINPUT":
                ipos = sc._start()
                i = sc.integer("an input index")
                if i < 1:
                    raise sc.error("input indices are 1-based", ipos)
                zero, one = self.arms("IFINPUT")
                out.append(IfInput(i, zero, one))
                return tuple(out)
            else:
                raise sc.error(f"unknown instruction {tok!r}", start)

    def arms(self, what):
        sc = self.sc
        sc.expect("{")
        arms = {}
        for expected in (0, 1):
            start = sc._start()
            tok = sc.peek()
            if tok != str(expected):
                raise sc.error(f"{what} block missing an outcome-{expected} arm", start)
            sc.next()
            sc.expect(":")
            arms[expected] = self.block()
        start = sc._start()
        if sc.peek() != "}":
            raise sc.error(f"expected '}}' closing the {what} block", start)
        sc.next()
        return arms[0], arms[1]

    def unitary(self, name, start):
        return self.unitary_args(canonical_name(name), start)

    def unitary_args(self, name, start):
        if name in self.gates:
            m = self.gates[name]
        elif name in LIBRARY:
            m = LIBRARY[name]
        else:
            raise self.sc.error(f"unknown gate id {name!r}", start)
        qubits = tuple(self.qubit() for _ in range(m.num_qubits))
        if len(set(qubits)) != len(qubits):
            raise self.sc.error(f"repeated qubit in {name}", start)
        return Gate.unitary(name, *qubits)

    def query(self, start):
        sc = self.sc
        address = []
        while sc.peek() != "->":
            if sc.peek() is None or not re.fullmatch(r"-?\d+", sc.peek()):
                raise sc.error("expected '->' in QUERY", sc._start())
            address.append(self.qubit())
        sc.next()
        target = self.qubit()
        if not address:
            raise sc.error("QUERY needs at least one address qubit", start)
        qs = tuple(address) + (target,)
        if len(set(qs)) != len(qs):
            raise sc.error("QUERY qubits must be distinct", start)
        return Gate.query(address, target)


# ------------------------------------------------------------------ writer

def format_program(p: BranchingProgram) -> str:
    lines = ["qprog 1", f"qubits {p.num_qubits}"]
    if p.input_length:
        lines.append(f"input {p.input_length}")
    for name, m in p.gates.items():
        lines.append(f"GATE {name} {m.dim} " + " ".join(m.literal_text()))
    _format_block(p.body, 0, lines)
    return "\n".join(lines) + "\n"


def _format_block(block, depth, lines):
    pad = "  " * depth
    for ins in block:
        if isinstance(ins, Apply):
            g = ins.gate
            lines.append(pad + ("CNOT " + " ".join(map(str, g.qubits)) if g.name == "CNOT" else str(g)))
        elif isinstance(ins, Verdict):
            lines.append(pad + ("ACCEPT" if ins.accept else "REJECT"))
        else:
            head = f"MEASURE {ins.qubit}" if isinstance(ins, Measure) else f"IFINPUT {ins.index}"
            lines.append(pad + head + " {")
            for label, arm in (("0", ins.zero), ("1", ins.one)):
                lines.append(pad + f"  {label}:")
                _format_block(arm, depth + 2, lines)
            lines.append(pad + "}")
