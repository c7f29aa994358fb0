"""Phase-quotiented geometry of single-qubit unitaries.

A unitary is reduced to SU(2) as [[a, b], [-b*, a*]] and stored as the unit
4-vector q = (Re a, Im a, Re b, Im b). For unit vectors the phase-minimized
operator-norm distance equals min(|q - q'|, |q + q'|), which is what the net's
KD-tree searches.
"""

from __future__ import annotations

import numpy as np

from qcountsim.core.gates import UnitaryMatrix, numeric_unitarity_error

UNITARY_TOL = 1e-8
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class NotUnitaryError(ValueError):
    pass


def as_matrix(u, check: bool = True) -> np.ndarray:
    m = u.to_numpy() if isinstance(u, UnitaryMatrix) else np.asarray(u, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if check and numeric_unitarity_error(m) > UNITARY_TOL:
        raise NotUnitaryError("matrix is not unitary")
    return m


def to_su2(u) -> np.ndarray:
    """Determinant-one representative of ``u`` (sign arbitrary)."""
    m = as_matrix(u, check=False)
    return m / np.sqrt(complex(np.linalg.det(m)))


def to_quaternion(u) -> np.ndarray:
    m = to_su2(u)
    q = np.array([m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag])
    return q / np.linalg.norm(q)


def from_quaternion(q) -> np.ndarray:
    a = complex(q[0], q[1])
    b = complex(q[2], q[3])
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def proj_distance(u, v) -> float:
    """min over theta of ||u - e^{i theta} v|| in operator norm."""
    w = to_su2(as_matrix(v).conj().T @ as_matrix(u))
    a, b = w[0, 0], w[0, 1]
    # eigenvalues of w are e^{+-i phi}; the best phase leaves angle min(phi, pi - phi)
    half = np.arctan2(np.hypot(a.imag, abs(b)), abs(a.real)) / 2
    return float(2 * np.sin(half))


def rotation(axis, angle: float) -> np.ndarray:
    """exp(-i angle/2 n.sigma) for a unit Bloch axis n."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    sigma = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * sigma


def axis_angle(u) -> tuple[np.ndarray, float]:
    """Bloch axis and angle in [0, pi] of ``u`` modulo phase."""
    m = to_su2(u)
    if m[0, 0].real < 0:
        m = -m
    # m = cos(a/2) I - i sin(a/2) (nx X + ny Y + nz Z)
    s = np.array([-m[0, 1].imag, -m[0, 1].real, -m[0, 0].imag])
    c = m[0, 0].real
    norm = np.linalg.norm(s)
    angle = 2 * np.arctan2(norm, c)
    if norm == 0:
        return np.array([0.0, 0.0, 1.0]), 0.0
    return s / norm, float(angle)
