"""Solovay-Kitaev approximation of single-qubit unitaries by net words."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qcountsim.skcompile.distance import (
    as_matrix,
    axis_angle,
    proj_distance,
    rotation,
    to_su2,
)
from qcountsim.skcompile.net import EpsilonNet, build_net
from qcountsim.skcompile.words import GateWord

COMMUTATOR_MAX = 0.5
MAX_DEPTH = 6


class SKFloorError(ValueError):
    """The requested accuracy is below what the net and depth cap can reach."""

    def __init__(self, eps: float, floor: float):
        super().__init__(f"accuracy {eps:g} unreachable; best achievable distance {floor:.3g}")
        self.eps = eps
        self.floor = floor


def _align(src, dst) -> np.ndarray:
    """A rotation taking Bloch vector ``src`` to ``dst``."""
    src = src / np.linalg.norm(src)
    dst = dst / np.linalg.norm(dst)
    axis = np.cross(src, dst)
    s, c = np.linalg.norm(axis), float(np.dot(src, dst))
    if s < 1e-15:
        if c > 0:
            return np.eye(2, dtype=complex)
        perp = np.cross(src, [1.0, 0, 0] if abs(src[0]) < 0.9 else [0, 1.0, 0])
        return rotation(perp, np.pi)
    return rotation(axis, np.arctan2(s, c))


def group_commutator_decompose(delta) -> tuple[np.ndarray, np.ndarray]:
    """Balanced v, w with v w v^dag w^dag equal to ``delta`` modulo phase.

    v and w are rotations by the same angle phi about perpendicular axes,
    conjugated so the commutator's axis lands on delta's axis; phi solves
    sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2)).
    """
    delta = as_matrix(delta)
    d = proj_distance(delta, np.eye(2))
    if d > COMMUTATOR_MAX:
        raise ValueError(f"delta is {d:.3g} from identity; at most {COMMUTATOR_MAX} allowed")
    axis, theta = axis_angle(delta)
    if theta == 0.0:
        return np.eye(2, dtype=complex), np.eye(2, dtype=complex)
    s4 = (1 - np.sqrt(1 - np.sin(theta / 2) ** 2)) / 2  # sin^4(phi/2)
    phi = 2 * np.arcsin(s4**0.25)
    v = rotation([1, 0, 0], phi)
    w = rotation([0, 1, 0], phi)
    comm_axis, _ = axis_angle(v @ w @ v.conj().T @ w.conj().T)
    s = _align(comm_axis, axis)
    return s @ v @ s.conj().T, s @ w @ s.conj().T


@dataclass
class SKResult:
    word: GateWord
    distance: float
    depth: int


class SolovayKitaev:
    """Memoizing approximator bound to one net."""

    def __init__(self, net: EpsilonNet):
        self.net = net

    def approx(self, u, depth: int) -> GateWord:
        u = to_su2(u)
        if depth == 0:
            return self.net.nearest(u)[0]
        prev = self.approx(u, depth - 1)
        delta = u @ prev.product.conj().T
        if proj_distance(delta, np.eye(2)) > COMMUTATOR_MAX:
            return prev
        v, w = group_commutator_decompose(delta)
        vw = self.approx(v, depth - 1)
        ww = self.approx(w, depth - 1)
        cand = vw @ ww @ vw.adjoint() @ ww.adjoint() @ prev
        # keep the refinement only when it helps; distances never grow with depth
        if proj_distance(cand.product, u) < proj_distance(prev.product, u):
            return cand
        return prev


def sk_approx(u, eps: float, net: EpsilonNet | None = None, max_depth: int = MAX_DEPTH,
              verify: bool = True) -> GateWord:
    """Shortest-depth word within ``eps`` of ``u`` modulo phase.

    Depth 0 is the nearest net entry; each further depth adds a group
    commutator correction. The result's distance is re-checked on the exactly
    evaluated word product when ``verify`` is set.
    """
    return sk_search(u, eps, net, max_depth, verify).word


def sk_search(u, eps: float, net: EpsilonNet | None = None, max_depth: int = MAX_DEPTH,
              verify: bool = True) -> SKResult:
    if eps <= 0:
        raise ValueError("eps must be positive")
    u = as_matrix(u)
    sk = SolovayKitaev(net if net is not None else build_net())
    best = None
    for depth in range(max_depth + 1):
        word = sk.approx(u, depth)
        dist = word.verified_distance(u) if verify else proj_distance(word.product, u)
        if best is None or dist < best.distance:
            best = SKResult(word, dist, depth)
        if dist <= eps:
            return best
    raise SKFloorError(eps, best.distance)
