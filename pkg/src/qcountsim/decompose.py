"""Exact compilation of arbitrary gates to CNOT and single-qubit gates.

Pipeline: unitary -> two-level gates -> Gray-code relabelling around one
multi-controlled single-qubit gate -> Toffoli ANDs into ancillas ->
CNOT + single-qubit networks.

Qubit order inside a fragment is big-endian: fragment qubit 0 is the most
significant bit of the gate's matrix index. Ancillas come after the data
qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qcountsim.core.gates import UnitaryMatrix, numeric_unitarity_error

ZERO_TOL = 1e-14
UNITARY_TOL = 1e-10

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
T = np.diag([1, np.exp(1j * np.pi / 4)])
TDG = T.conj()


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TwoLevelGate:
    dim: int
    a: int
    b: int
    block: np.ndarray

    def matrix(self) -> np.ndarray:
        m = np.eye(self.dim, dtype=complex)
        idx = np.array([self.a, self.b])
        m[np.ix_(idx, idx)] = self.block
        return m

    def adjoint(self) -> TwoLevelGate:
        return TwoLevelGate(self.dim, self.a, self.b, self.block.conj().T)


@dataclass(frozen=True, eq=False)
class Op:
    """Single-qubit ``matrix`` on ``target``, applied when every control qubit
    holds its required value."""

    target: int
    matrix: np.ndarray
    controls: tuple[int, ...] = ()
    values: tuple[int, ...] = ()
    label: str = "U"

    @property
    def is_cnot(self) -> bool:
        return (len(self.controls) == 1 and self.values == (1,)
                and np.array_equal(self.matrix, X))

    @property
    def is_single(self) -> bool:
        return not self.controls

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


def cnot(control: int, target: int) -> Op:
    return Op(target, X, (control,), (1,), "CNOT")


def single(target: int, matrix, label: str = "U") -> Op:
    return Op(target, np.asarray(matrix, dtype=complex), (), (), label)


@dataclass
class CircuitFragment:
    num_qubits: int
    ops: list[Op] = field(default_factory=list)
    ancillas: int = 0

    @property
    def width(self) -> int:
        return self.num_qubits + self.ancillas

    def is_final(self) -> bool:
        return all(op.is_single or op.is_cnot for op in self.ops)

    def __len__(self):
        return len(self.ops)


# ------------------------------------------------------------ simulation

def _apply_op(psi: np.ndarray, op: Op, width: int) -> np.ndarray:
    """psi has shape (2,)*width + (batch,)."""
    sel = [slice(None)] * (width + 1)
    for q, v in zip(op.controls, op.values):
        sel[q] = v
    sub = psi[tuple(sel)]
    # the target axis index inside ``sub`` after integer indexing removed control axes
    axis = op.target - sum(1 for q in op.controls if q < op.target)
    sub = np.moveaxis(np.tensordot(op.matrix, sub, axes=([1], [axis])), 0, axis)
    out = psi.copy()
    out[tuple(sel)] = sub
    return out


def fragment_unitary(frag: CircuitFragment) -> np.ndarray:
    """Full 2^width matrix of the fragment, ancillas included."""
    w = frag.width
    dim = 1 << w
    psi = np.eye(dim, dtype=complex).reshape((2,) * w + (dim,))
    for op in frag.ops:
        psi = _apply_op(psi, op, w)
    return psi.reshape(dim, dim)


def induced_unitary(frag: CircuitFragment) -> np.ndarray:
    """Action on the data qubits with ancillas prepared and read in |0...0>."""
    full = fragment_unitary(frag)
    step = 1 << frag.ancillas
    return full[::step, ::step]


def ancilla_leakage(frag: CircuitFragment) -> float:
    """Largest amplitude left on nonzero ancilla states, over data basis inputs."""
    if not frag.ancillas:
        return 0.0
    full = fragment_unitary(frag)
    step = 1 << frag.ancillas
    cols = full[:, ::step]
    mask = np.ones(full.shape[0], dtype=bool)
    mask[::step] = False
    return float(np.linalg.norm(cols[mask], axis=0).max()) if mask.any() else 0.0


# ------------------------------------------------------------ stage 1

def _as_array(u) -> np.ndarray:
    arr = u.to_numpy() if isinstance(u, UnitaryMatrix) else np.asarray(u, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DecompositionError("expected a square matrix")
    return arr


def two_level_decompose(u) -> list[TwoLevelGate]:
    """Two-level factors whose ordered product g[0] @ g[1] @ ... equals ``u``."""
    U = _as_array(u).copy()
    d = U.shape[0]
    if d < 2 or d & (d - 1):
        raise DecompositionError(f"dimension {d} is not a power of two")
    if numeric_unitarity_error(U) > UNITARY_TOL:
        raise DecompositionError("matrix is not unitary")
    eliminations: list[TwoLevelGate] = []
    for j in range(d - 2):
        touched = False
        for i in range(j + 1, d):
            b = U[i, j]
            if abs(b) < ZERO_TOL:
                continue
            a = U[j, j]
            n = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
            g = TwoLevelGate(d, j, i, np.array([[a.conjugate(), b.conjugate()], [b, -a]]) / n)
            U[[j, i], :] = g.block @ U[[j, i], :]
            eliminations.append(g)
            touched = True
        if not touched and abs(U[j, j] - 1) > ZERO_TOL:
            g = TwoLevelGate(d, j, j + 1, np.diag([U[j, j].conjugate(), 1]))
            U[[j, j + 1], :] = g.block @ U[[j, j + 1], :]
            eliminations.append(g)
    final = TwoLevelGate(d, d - 2, d - 1, U[d - 2:, d - 2:].copy())
    return [g.adjoint() for g in eliminations] + [final]


# ------------------------------------------------------------ stage 2

def gray_path(a: int, b: int, n: int) -> list[int]:
    """Basis states from a to b, flipping one differing bit at a time (MSB first)."""
    path = [a]
    cur = a
    for q in range(n):
        bit = 1 << (n - 1 - q)
        if (a ^ b) & bit:
            cur ^= bit
            path.append(cur)
    return path


def _bits(state: int, n: int) -> list[int]:
    return [(state >> (n - 1 - q)) & 1 for q in range(n)]


def _differing_qubit(s: int, t: int, n: int) -> int:
    diff = s ^ t
    return n - diff.bit_length()


def _controlled_on_rest(target: int, state: int, n: int, matrix, label) -> Op:
    bits = _bits(state, n)
    controls = tuple(q for q in range(n) if q != target)
    return Op(target, np.asarray(matrix, dtype=complex), controls,
              tuple(bits[q] for q in controls), label)


def two_level_to_controlled(g: TwoLevelGate, n: int) -> CircuitFragment:
    if g.dim != 1 << n:
        raise DecompositionError(f"two-level gate of dimension {g.dim} on {n} qubits")
    path = gray_path(g.a, g.b, n)
    swaps = []
    for k in range(len(path) - 2):
        q = _differing_qubit(path[k], path[k + 1], n)
        swaps.append(_controlled_on_rest(q, path[k], n, X, "MCX"))
    c = path[-2]
    q = _differing_qubit(c, g.b, n)
    (uaa, uab), (uba, ubb) = g.block
    if _bits(c, n)[q] == 0:
        block = np.array([[uaa, uab], [uba, ubb]])
    else:
        block = np.array([[ubb, uba], [uab, uaa]])
    core = _controlled_on_rest(q, g.b, n, block, "MCU")
    return CircuitFragment(n, swaps + [core] + swaps[::-1])


# ------------------------------------------------------------ stage 3

def zyz(u: np.ndarray) -> tuple[float, float, float, float]:
    """(alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    u = np.asarray(u, dtype=complex)
    alpha = np.angle(np.linalg.det(u)) / 2
    v = u * np.exp(-1j * alpha)
    gamma = 2 * np.arctan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[0, 0]) > ZERO_TOL and abs(v[1, 0]) > ZERO_TOL:
        s = 2 * np.angle(v[1, 1])
        dlt = 2 * np.angle(v[1, 0])
    elif abs(v[1, 0]) <= ZERO_TOL:
        s, dlt = 2 * np.angle(v[1, 1]), 0.0
    else:
        s, dlt = 0.0, 2 * np.angle(v[1, 0])
    beta, delta = (s + dlt) / 2, (s - dlt) / 2
    return alpha, beta, gamma, delta


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _controlled_u_network(control: int, target: int, u: np.ndarray) -> list[Op]:
    if np.array_equal(u, X):
        return [cnot(control, target)]
    alpha, beta, gamma, delta = zyz(u)
    a = rz(beta) @ ry(gamma / 2)
    b = ry(-gamma / 2) @ rz(-(delta + beta) / 2)
    c = rz((delta - beta) / 2)
    ops = [single(target, c, "C"), cnot(control, target), single(target, b, "B"),
           cnot(control, target), single(target, a, "A")]
    if abs(alpha) > ZERO_TOL:
        ops.append(single(control, np.diag([1, np.exp(1j * alpha)]), "P"))
    return ops


def toffoli_network(a: int, b: int, c: int) -> list[Op]:
    """Six-CNOT Toffoli with H, T and T† gates."""
    return [
        single(c, H, "H"), cnot(b, c), single(c, TDG, "Tdg"), cnot(a, c), single(c, T, "T"),
        cnot(b, c), single(c, TDG, "Tdg"), cnot(a, c), single(b, T, "T"), single(c, T, "T"),
        single(c, H, "H"), cnot(a, b), single(a, T, "T"), single(b, TDG, "Tdg"), cnot(a, b),
    ]


def controlled_to_cnot_single(frag: CircuitFragment) -> CircuitFragment:
    """Replace multi-controlled gates by CNOT + single-qubit networks.

    Controls are ANDed pairwise into ancillas with Toffolis (k controls use k-1
    ancillas), and the ANDs are undone afterwards so ancillas return to |0>.
    """
    ancillas = frag.ancillas
    base = frag.num_qubits + frag.ancillas
    ops: list[Op] = []
    for op in frag.ops:
        if op.is_single or op.is_cnot:
            ops.append(op)
            continue
        flips = [single(q, X, "X") for q, v in zip(op.controls, op.values) if v == 0]
        ctrls = list(op.controls)
        ops.extend(flips)
        if len(ctrls) == 1:
            ops.extend(_controlled_u_network(ctrls[0], op.target, op.matrix))
        else:
            need = len(ctrls) - 1
            ancillas = max(ancillas, frag.ancillas + need)
            anc = [base + k for k in range(need)]
            chain = [(ctrls[0], ctrls[1], anc[0])]
            for k in range(2, len(ctrls)):
                chain.append((anc[k - 2], ctrls[k], anc[k - 1]))
            compute = [o for a, b, c in chain for o in toffoli_network(a, b, c)]
            uncompute = [o for a, b, c in reversed(chain) for o in toffoli_network(a, b, c)]
            ops.extend(compute)
            ops.extend(_controlled_u_network(anc[-1], op.target, op.matrix))
            ops.extend(uncompute)
        ops.extend(flips)
    return CircuitFragment(frag.num_qubits, ops, ancillas)


def fuse_single_qubit(frag: CircuitFragment) -> CircuitFragment:
    """Multiply runs of single-qubit gates on the same qubit into one gate."""
    pending: dict[int, np.ndarray] = {}
    ops: list[Op] = []

    def flush(q):
        m = pending.pop(q, None)
        if m is not None and not np.array_equal(m, I2):
            ops.append(single(q, m))

    for op in frag.ops:
        if op.is_single:
            pending[op.target] = op.matrix @ pending.get(op.target, I2)
            continue
        for q in op.qubits:
            flush(q)
        ops.append(op)
    for q in sorted(pending):
        flush(q)
    return CircuitFragment(frag.num_qubits, ops, frag.ancillas)


_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def decompose_gate(u) -> CircuitFragment:
    """CNOT + single-qubit fragment on local qubits 0..n-1 (plus ancillas)."""
    arr = _as_array(u)
    d = arr.shape[0]
    if d < 2 or d & (d - 1):
        raise DecompositionError(f"dimension {d} is not a power of two")
    if numeric_unitarity_error(arr) > UNITARY_TOL:
        raise DecompositionError("matrix is not unitary")
    n = d.bit_length() - 1
    if n == 1:
        return CircuitFragment(1, [single(0, arr)])
    if np.array_equal(arr, _CNOT):
        return CircuitFragment(2, [cnot(0, 1)])
    ops: list[Op] = []
    for g in reversed(two_level_decompose(arr)):
        ops.extend(two_level_to_controlled(g, n).ops)
    frag = controlled_to_cnot_single(CircuitFragment(n, ops))
    return fuse_single_qubit(frag)
