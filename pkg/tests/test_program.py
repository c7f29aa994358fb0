from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcountsim.core.gates import Gate
from qcountsim.corpus import CorpusBounds, random_input, random_program
from qcountsim.program import (
    BranchingProgram,
    DSLError,
    NotNormalizedError,
    ProgramError,
    Verdict,
    format_program,
    gate_at,
    gate_profile,
    normalize,
    parse_program,
    profile,
)
from qcountsim.program.model import input_bit
from qcountsim.statevec import enumerate_branches


def test_parse_measure_program():
    p = parse_program("qubits 1; U H 0; MEASURE 0 {0: ACCEPT 1: REJECT}")
    prof = gate_profile(p)
    assert (prof.t, prof.m) == (2, 1)


def test_parse_cnot_only():
    p = parse_program("qubits 2; CNOT 0 1; ACCEPT")
    prof = gate_profile(p)
    assert (prof.t, prof.m) == (1, 0)


@pytest.mark.parametrize("text, fragment", [
    ("qubits 1\nU H 0\nMEASURE 0 {0: ACCEPT}", "outcome-1 arm"),
    ("qubits 1\nU Q 0\nACCEPT", "unknown gate"),
    ("qubits 1\nU H 3\nACCEPT", "out of range"),
    ("qubits 1\nU H 0", "ACCEPT or REJECT"),
    ("qubits 2\nGATE V 2 1 0 0\nACCEPT", None),
])
def test_parse_errors(text, fragment):
    with pytest.raises(DSLError) as exc:
        parse_program(text)
    assert exc.value.line >= 1 and exc.value.col >= 1
    if fragment:
        assert fragment in str(exc.value)


def test_error_reports_line():
    with pytest.raises(DSLError) as exc:
        parse_program("qprog 1\nqubits 1\n\nU X 7\nACCEPT\n")
    assert exc.value.line == 4


def test_dsl_features():
    p = parse_program("""
        qprog 1
        qubits 2   # two qubits
        input 3
        GATE V 2 sqrt(1/2) -sqrt(1/2) sqrt(1/2) sqrt(1/2)
        U H 0
        CX 0 1
        QUERY 0 -> 1
        IFINPUT 2 { 0: ACCEPT 1: U V 1; MEASURE 1 { 0: ACCEPT 1: REJECT } }
    """)
    assert p.input_length == 3
    assert "V" in p.gates
    assert p.body[1].gate == Gate.unitary("CNOT", 0, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_format_roundtrip(seed):
    import random

    p = random_program(random.Random(seed), normalized=False)
    q = parse_program(format_program(p))
    assert q == p
    assert format_program(q) == format_program(p)


def test_input_bit_indexing():
    assert input_bit("01", 1) == 0
    assert input_bit("01", 2) == 1
    assert input_bit("01", 3) == 0


# ------------------------------------------------------------------ gate_at

def test_gate_at_steps():
    p = parse_program("qubits 1; U H 0; MEASURE 0 {0: ACCEPT 1: REJECT}")
    assert gate_at(p, "", "", 1) == Gate.unitary("H", 0)
    assert gate_at(p, "", "", 2) == Gate.measure(0)
    assert gate_at(p, "", "0", 3) == Verdict(True)
    assert gate_at(p, "", "1", 3) == Verdict(False)


def test_gate_at_resolves_input():
    p = parse_program("qubits 1; input 2; IFINPUT 1 { 0: U H 0; ACCEPT 1: U F 0; ACCEPT }")
    assert gate_at(p, "10", "", 1) == Gate.unitary("F", 0)
    assert gate_at(p, "00", "", 1) == Gate.unitary("H", 0)


@pytest.mark.parametrize("mu, tau", [("", 3), ("01", 3), ("0", 9)])
def test_gate_at_errors(mu, tau):
    p = parse_program("qubits 1; U H 0; MEASURE 0 {0: ACCEPT 1: REJECT}")
    with pytest.raises(ProgramError):
        gate_at(p, "", mu, tau)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gate_at_agrees_with_paths(seed):
    import random

    r = random.Random(seed)
    p = random_program(r, normalized=False)
    x = random_input(r, p.input_length)
    for path in p.paths(x):
        seen = 0
        for tau, g in enumerate(path.gates, start=1):
            mu = path.mu[:seen]
            assert gate_at(p, x, mu, tau) == g
            seen += g.kind == "measure"
        assert gate_at(p, x, path.mu, len(path.gates) + 1) == Verdict(path.accept)


# ------------------------------------------------------------------ normalize

def test_normalize_pads_h():
    p = parse_program("qubits 1; MEASURE 0 { 0: U H 0; U H 0; ACCEPT 1: REJECT }")
    q = normalize(p)
    assert gate_profile(q).h == 2
    assert q.num_qubits == 2


def test_normalize_pads_measurements():
    p = parse_program("qubits 1; U H 0; MEASURE 0 { 0: U H 0; MEASURE 0 { 0: ACCEPT 1: REJECT } "
                      "1: REJECT }")
    q = normalize(p)
    prof = gate_profile(q)
    assert prof.m == 2
    before = {b.mu: b.p for b in enumerate_branches(p)}
    after = {b.mu: b.p for b in enumerate_branches(q)}
    assert after[(1, 0)] == before[(1,)]
    assert after[(1, 1)] == 0
    for mu in ((0, 0), (0, 1)):
        assert after[mu] == before[mu]


def test_normalize_cnot_only_profile():
    p = parse_program("qubits 2; CNOT 0 1; ACCEPT")
    assert gate_profile(p).h == 0
    assert gate_profile(normalize(p)).h == 2


def test_normalize_leaves_uniform_program(hfh):
    assert normalize(hfh) is hfh


def test_normalize_rejects_other_gates():
    with pytest.raises(ProgramError):
        normalize(parse_program("qubits 1; U T 0; ACCEPT"))


def test_profile_examples(hfh):
    p = parse_program("qubits 1; U H 0; MEASURE 0 {0: ACCEPT 1: REJECT}")
    prof = profile(p)
    assert (prof.t, prof.m, prof.f, prof.h) == (2, 1, 0, 1)
    prof = profile(hfh)
    assert (prof.t, prof.m, prof.f, prof.h) == (4, 1, 1, 2)
    assert prof.g >= 1 and 2**prof.g >= 80


def test_profile_requires_uniform():
    p = parse_program("qubits 1; MEASURE 0 { 0: U H 0; ACCEPT 1: REJECT }")
    with pytest.raises(NotNormalizedError):
        gate_profile(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_normalize_properties(seed):
    import random

    r = random.Random(seed)
    p = random_program(r, CorpusBounds(4, 10, 2, 2), normalized=False)
    x = random_input(r, p.input_length)
    q = normalize(p)
    assert normalize(q) is q
    prof = gate_profile(q, x)
    assert prof.h >= 1 and prof.m <= prof.t and prof.f + prof.h <= prof.t
    # every original history keeps its probability; padded histories add zero mass
    before = {b.mu: b.p for b in enumerate_branches(p, x)}
    after = {b.mu: b.p for b in enumerate_branches(q, x)}
    assert sum(after.values(), Fraction(0)) == 1
    for mu, pr in before.items():
        padded = [v for k, v in after.items() if k[:len(mu)] == mu]
        assert after[mu + (0,) * (prof.m - len(mu))] == pr
        assert sum(padded, Fraction(0)) == pr


def test_program_without_verdict_is_invalid():
    p = BranchingProgram(1, 0, ())
    with pytest.raises(ProgramError):
        p.validate()
