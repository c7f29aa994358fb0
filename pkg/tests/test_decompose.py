import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_gate
from qcountsim.core.gates import LIBRARY, UnitaryMatrix
from qcountsim.core.linalg import op_norm, random_unitary
from qcountsim.decompose import (
    CircuitFragment,
    DecompositionError,
    Op,
    TwoLevelGate,
    ancilla_leakage,
    cnot,
    controlled_to_cnot_single,
    decompose_gate,
    fragment_unitary,
    gray_path,
    induced_unitary,
    single,
    toffoli_network,
    two_level_decompose,
    two_level_to_controlled,
    zyz,
)


def product(gates):
    out = np.eye(gates[0].dim, dtype=complex)
    for g in gates:
        out = out @ g.matrix()
    return out


def oracle_unitary(frag: CircuitFragment) -> np.ndarray:
    """Fragment matrix as a product of dense gate matrices."""
    w = frag.width
    u = np.eye(1 << w, dtype=complex)
    for op in frag.ops:
        k = len(op.controls)
        m = np.eye(1 << (k + 1), dtype=complex)
        # control pattern selects one 2x2 block
        row = 0
        for v in op.values:
            row = (row << 1) | v
        m[2 * row:2 * row + 2, 2 * row:2 * row + 2] = op.matrix
        u = dense_gate(m, op.controls + (op.target,), w) @ u
    return u


def test_two_level_single_qubit(nrng):
    u = random_unitary(nrng, 2)
    gs = two_level_decompose(u)
    assert len(gs) == 1
    assert np.allclose(gs[0].matrix(), u, atol=1e-14)


def test_two_level_diagonal_phase():
    u = np.diag([1, 1, 1, np.exp(1j * np.pi / 3)])
    gs = two_level_decompose(u)
    assert len(gs) == 1
    assert (gs[0].a, gs[0].b) == (2, 3)
    assert np.allclose(product(gs), u)


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_two_level_reconstruction(nrng, dim):
    for _ in range(5):
        u = random_unitary(nrng, dim)
        gs = two_level_decompose(u)
        assert len(gs) <= dim * (dim - 1) // 2
        assert op_norm(product(gs) - u) <= 1e-10
        for g in gs:
            assert np.abs(g.block @ g.block.conj().T - np.eye(2)).max() < 1e-12


def test_two_level_rejects_bad_input():
    with pytest.raises(DecompositionError):
        two_level_decompose(np.diag([1, 2]))
    with pytest.raises(DecompositionError):
        two_level_decompose(np.eye(3))


def test_gray_path():
    assert gray_path(0, 7, 3) == [0, 4, 6, 7]
    assert gray_path(5, 5, 3) == [5]


def test_two_level_to_controlled_adjacent(nrng):
    g = TwoLevelGate(4, 0, 1, random_unitary(nrng, 2))
    frag = two_level_to_controlled(g, 2)
    assert len(frag.ops) == 1
    assert np.allclose(oracle_unitary(frag), g.matrix(), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_two_level_to_controlled_far_pair(nrng, n):
    g = TwoLevelGate(1 << n, 0, (1 << n) - 1, random_unitary(nrng, 2))
    frag = two_level_to_controlled(g, n)
    # n - 1 relabelling steps each way around one controlled gate
    assert len(frag.ops) == 2 * (n - 1) + 1
    assert op_norm(oracle_unitary(frag) - g.matrix()) <= 1e-10


def test_two_level_identity_block():
    frag = two_level_to_controlled(TwoLevelGate(8, 2, 5, np.eye(2)), 3)
    assert op_norm(fragment_unitary(frag) - np.eye(8)) <= 1e-10


def test_two_level_dimension_mismatch():
    with pytest.raises(DecompositionError):
        two_level_to_controlled(TwoLevelGate(8, 0, 1, np.eye(2)), 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_two_level_to_controlled_random_pairs(seed, n):
    r = np.random.default_rng(seed)
    a, b = sorted(r.choice(1 << n, size=2, replace=False))
    g = TwoLevelGate(1 << n, int(a), int(b), random_unitary(r, 2))
    frag = two_level_to_controlled(g, n)
    assert op_norm(fragment_unitary(frag) - g.matrix()) <= 1e-10
    assert np.allclose(fragment_unitary(frag), oracle_unitary(frag))


def test_toffoli_network():
    frag = CircuitFragment(3, toffoli_network(0, 1, 2))
    assert frag.is_final()
    assert op_norm(fragment_unitary(frag) - LIBRARY["TOFFOLI"].to_numpy()) <= 1e-10


def test_controlled_u_network(nrng):
    u = random_unitary(nrng, 2)
    frag = controlled_to_cnot_single(CircuitFragment(2, [Op(1, u, (0,), (1,))]))
    assert frag.is_final() and frag.ancillas == 0
    expected = np.eye(4, dtype=complex)
    expected[2:, 2:] = u
    assert op_norm(fragment_unitary(frag) - expected) <= 1e-10


def test_already_final_fragment_unchanged(nrng):
    ops = [single(0, random_unitary(nrng, 2)), cnot(0, 1)]
    frag = controlled_to_cnot_single(CircuitFragment(2, ops))
    assert frag.ops == ops


@pytest.mark.parametrize("k", [2, 3, 4])
def test_multi_controlled_with_ancillas(nrng, k):
    u = random_unitary(nrng, 2)
    values = tuple(int(v) for v in nrng.integers(0, 2, size=k))
    frag = controlled_to_cnot_single(CircuitFragment(k + 1, [Op(k, u, tuple(range(k)), values)]))
    assert frag.is_final() and frag.ancillas == k - 1
    expected = np.eye(1 << (k + 1), dtype=complex)
    row = int("".join(map(str, values)), 2)
    expected[2 * row:2 * row + 2, 2 * row:2 * row + 2] = u
    assert op_norm(induced_unitary(frag) - expected) <= 1e-10
    assert ancilla_leakage(frag) <= 1e-9


def test_zyz_roundtrip(nrng):
    from qcountsim.decompose import ry, rz

    for _ in range(50):
        u = random_unitary(nrng, 2)
        a, b, c, d = zyz(u)
        assert np.allclose(np.exp(1j * a) * rz(b) @ ry(c) @ rz(d), u, atol=1e-12)
    for u in (np.eye(2), LIBRARY["X"].to_numpy(), np.diag([1, 1j])):
        a, b, c, d = zyz(u)
        assert np.allclose(np.exp(1j * a) * rz(b) @ ry(c) @ rz(d), u, atol=1e-12)


def test_decompose_library_cases():
    frag = decompose_gate(LIBRARY["CNOT"])
    assert len(frag) == 1 and frag.ops[0].is_cnot
    frag = decompose_gate(LIBRARY["H"])
    assert len(frag) == 1 and frag.ops[0].is_single


@pytest.mark.parametrize("name", ["SWAP", "CZ", "TOFFOLI"])
def test_decompose_library_multi_qubit(name):
    u = LIBRARY[name].to_numpy()
    frag = decompose_gate(LIBRARY[name])
    assert frag.is_final()
    assert op_norm(induced_unitary(frag) - u) <= 1e-9
    # gate count is a function of the gate alone
    assert len(decompose_gate(LIBRARY[name])) == len(frag)


def test_decompose_random_8(nrng):
    u = random_unitary(nrng, 8)
    frag = decompose_gate(UnitaryMatrix.from_array(u))
    assert frag.is_final()
    assert op_norm(induced_unitary(frag) - u) <= 1e-9
    assert ancilla_leakage(frag) <= 1e-9


def test_fragment_simulation_matches_dense(nrng):
    u = random_unitary(nrng, 4)
    frag = decompose_gate(u)
    assert np.allclose(fragment_unitary(frag), oracle_unitary(frag), atol=1e-12)


def test_decompose_rejects_non_unitary():
    with pytest.raises(DecompositionError):
        decompose_gate(np.ones((2, 2)))
