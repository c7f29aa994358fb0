import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import grid_proj_distance
from qcountsim.core.gates import Gate, UnitaryMatrix, is_universal
from qcountsim.core.linalg import random_unitary
from qcountsim.corpus import random_general_program
from qcountsim.program.model import Apply, BranchingProgram, Measure, Verdict
from qcountsim.skcompile import (
    NetTooLargeError,
    NotUnitaryError,
    SKFloorError,
    build_net,
    compile_program,
    compile_with_report,
    group_commutator_decompose,
    proj_distance,
    sk_approx,
    sk_search,
)
from qcountsim.skcompile.distance import rotation
from qcountsim.skcompile.net import EpsilonNet, cache_key
from qcountsim.skcompile.words import LETTER_MATRIX, GateWord
from qcountsim.statevec import GENERAL, accept_probability

H = LETTER_MATRIX["H"]
X = np.array([[0, 1], [1, 0]], dtype=complex)
T = np.diag([1, np.exp(1j * np.pi / 4)])


# -- distance

def test_distance_examples():
    assert proj_distance(H, H) == pytest.approx(0, abs=1e-15)
    assert proj_distance(H, np.exp(0.7j) * H) == pytest.approx(0, abs=1e-7)
    assert proj_distance(np.eye(2), X) == pytest.approx(np.sqrt(2), abs=1e-12)


def test_distance_against_phase_grid(nrng):
    for _ in range(20):
        u, v = random_unitary(nrng, 2), random_unitary(nrng, 2)
        assert proj_distance(u, v) == pytest.approx(grid_proj_distance(u, v), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_distance_symmetric_and_phase_invariant(seed, phase):
    r = np.random.default_rng(seed)
    u, v, w = (random_unitary(r, 2) for _ in range(3))
    d = proj_distance(u, v)
    assert d == pytest.approx(proj_distance(v, u), abs=1e-12)
    assert d == pytest.approx(proj_distance(np.exp(1j * phase) * u, v), abs=1e-7)
    assert 0 <= d <= np.sqrt(2) + 1e-12
    assert d <= proj_distance(u, w) + proj_distance(w, v) + 1e-12


def test_distance_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        proj_distance(np.ones((2, 2)), np.eye(2))


# -- words

def test_word_conventions():
    w = GateWord.parse("H F")
    assert np.allclose(w.product, H @ LETTER_MATRIX["F"])
    assert w.circuit_order() == ("F", "H")
    assert len(GateWord.parse("H H F Fdg")) == 0


def test_word_exact_product_matches_float(nrng):
    letters = [str(a) for a in nrng.choice(["F", "Fdg", "H"], size=40)]
    w = GateWord(letters)
    assert np.allclose(w.exact_matrix(), w.product, atol=1e-12)


# -- net

@pytest.mark.parametrize("length, size", [(1, 4), (2, 10)])
def test_small_nets(length, size):
    assert len(build_net(length, cache=False)) == size


def test_net_covering_radius(net):
    assert len(net) > 10000
    assert net.covering_radius <= 0.14
    # regression value from the L=12 build
    assert net.covering_radius == pytest.approx(0.1254, abs=2e-3)


def test_net_entries_match_words(net):
    for k in range(0, len(net), 997):
        w = net.word(k)
        assert len(w) <= 12
        assert proj_distance(w.product, from_q(net.quats[k])) < 1e-9


def from_q(q):
    from qcountsim.skcompile.distance import from_quaternion

    return from_quaternion(q)


def test_net_cache_roundtrip(tmp_path):
    built = build_net(6, cache=tmp_path)
    path = tmp_path / f"net-{cache_key(6)}.npz"
    assert path.exists()
    loaded = EpsilonNet.load(path)
    assert loaded.digest() == built.digest()


def test_net_cache_detects_corruption(tmp_path):
    built = build_net(5, cache=False)
    path = tmp_path / "bad.npz"
    np.savez(path, version=1, max_length=5, quats=built.quats * 0.5, parents=built.parents,
             letters=built.letters, covering_radius=0.0, digest=built.digest())
    with pytest.raises(ValueError, match="corrupt"):
        EpsilonNet.load(path)


def test_net_entry_cap():
    with pytest.raises(NetTooLargeError):
        build_net(9, entry_cap=100, cache=False)


# -- group commutator

@pytest.mark.parametrize("axis, angle", [((0, 0, 1), 0.01), ((1, 1, 1), 0.05), ((1, 0, 0), 0.4)])
def test_commutator_reproduces_delta(axis, angle):
    delta = rotation(axis, angle)
    v, w = group_commutator_decompose(delta)
    assert proj_distance(v @ w @ v.conj().T @ w.conj().T, delta) < 1e-12
    d = proj_distance(delta, np.eye(2))
    # balanced: v and w sit at distance about sqrt(d) from I
    for m in (v, w):
        assert proj_distance(m, np.eye(2)) <= 2 * np.sqrt(d)


def test_commutator_of_identity():
    v, w = group_commutator_decompose(np.eye(2))
    assert np.allclose(v, np.eye(2)) and np.allclose(w, np.eye(2))


def test_commutator_rejects_far_delta():
    with pytest.raises(ValueError):
        group_commutator_decompose(X)


# -- Solovay-Kitaev

@pytest.mark.parametrize("name", ["H", "Fdg", "F"])
def test_sk_library_letter_is_exact(net, name):
    w = sk_approx(LETTER_MATRIX[name], 1e-3, net)
    assert str(w) == name


def test_sk_t_gate(net):
    res = sk_search(T, 0.05, net)
    assert res.distance <= 0.05
    assert proj_distance(res.word.exact_matrix(), T) == pytest.approx(res.distance, abs=1e-12)


@pytest.mark.parametrize("eps", [0.1, 0.01, 0.001])
def test_sk_random_targets(net, nrng, eps):
    for _ in range(4):
        u = random_unitary(nrng, 2)
        w = sk_approx(u, eps, net)
        assert proj_distance(w.exact_matrix(), u) <= eps


def test_sk_adjoint_word(net, nrng):
    u = random_unitary(nrng, 2)
    w = sk_approx(u, 0.01, net)
    assert proj_distance(w.adjoint().product, u.conj().T) <= 0.01 + 1e-12


def test_sk_floor(net, nrng):
    with pytest.raises(SKFloorError) as info:
        sk_search(random_unitary(nrng, 2), 1e-9, net, max_depth=1)
    assert info.value.floor > 1e-9


def test_sk_rejects_bad_eps(net):
    with pytest.raises(ValueError):
        sk_approx(H, 0, net)


# -- compile pipeline

def test_compile_universal_pass_through(hfh, net):
    out = compile_program(hfh, net=net)
    assert accept_probability(out) == accept_probability(hfh)
    assert all(is_universal(g) for path in out.paths() for g in path.gates)


def single_gate_program(u) -> BranchingProgram:
    gates = {"G0": UnitaryMatrix.from_array(u, "G0")}
    body = (Apply(Gate.unitary("H", 0)), Apply(Gate.unitary("G0", 0)),
            Measure(0, (Verdict(True),), (Verdict(False),)))
    return BranchingProgram(1, 0, body, gates)


@pytest.mark.parametrize("eps", [0.05, 0.01])
def test_compile_single_gate_drift(net, nrng, eps):
    for _ in range(3):
        p = single_gate_program(random_unitary(nrng, 2))
        rep = compile_with_report(p, eps, net)
        assert rep.t_prime == 3  # H, G0, MEASURE
        q = rep.program
        assert all(is_universal(g) for path in q.paths() for g in path.gates)
        drift = abs(accept_probability(q, mode=GENERAL) - accept_probability(p))
        assert drift <= rep.error_budget
        assert rep.max_distance <= eps


def test_compile_two_qubit_gate_drift(net, nrng):
    gates = {"G0": UnitaryMatrix.from_array(random_unitary(nrng, 4), "G0")}
    body = (Apply(Gate.unitary("H", 0)), Apply(Gate.unitary("G0", 0, 1)),
            Measure(1, (Verdict(True),), (Verdict(False),)))
    p = BranchingProgram(2, 0, body, gates)
    rep = compile_with_report(p, net=net)
    drift = abs(accept_probability(rep.program, mode=GENERAL) - accept_probability(p))
    assert drift <= 0.1
    assert rep.eps == pytest.approx(1 / (20 * rep.t_prime))


def test_compile_random_general_program(net):
    p = random_general_program(random.Random(3), num_qubits=2, max_gates=3)
    rep = compile_with_report(p, net=net)
    drift = abs(accept_probability(rep.program, mode=GENERAL) - accept_probability(p))
    assert drift <= min(0.1, rep.error_budget)


def test_compile_rejects_bad_eps(hfh, net):
    with pytest.raises(ValueError):
        compile_program(hfh, eps=-1, net=net)
