"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np

from qcountsim.core.gates import MEASURE, QUERY
from qcountsim.program.model import input_bit

UNITS = {(1, 0): 0, (-1, 0): 1, (0, 1): 2, (0, -1): 3}


def _times(alpha, unit):
    a, b = alpha
    c, d = unit
    return (a * c - b * d, a * d + b * c)


def _bit_of(sigma, q, width):
    return (sigma >> (width - 1 - q)) & 1


def tree_walk(gates, width, mu=(), x=""):
    """Grow the computation tree node by node and tally leaves per (sigma, alpha).

    Every node is stored explicitly; only usable for tiny programs.
    """
    nodes = [(0, (1, 0))]
    outcomes = iter(mu)
    for g in gates:
        q = g.qubits
        children = []
        if g.kind == MEASURE:
            bit = next(outcomes)
            children = [n for n in nodes if _bit_of(n[0], q[0], width) == bit]
        elif g.kind == QUERY:
            for sigma, alpha in nodes:
                addr = 0
                for a in g.address:
                    addr = (addr << 1) | _bit_of(sigma, a, width)
                flip = input_bit(x, addr + 1) << (width - 1 - g.target)
                children.append((sigma ^ flip, alpha))
        elif g.name == "H":
            mask = 1 << (width - 1 - q[0])
            for sigma, alpha in nodes:
                children.append((sigma & ~mask, alpha))
                sign = -1 if sigma & mask else 1
                children.append((sigma | mask, (sign * alpha[0], sign * alpha[1])))
        elif g.name in ("F", "Fdg"):
            turn = (0, 1) if g.name == "F" else (0, -1)
            for sigma, alpha in nodes:
                if _bit_of(sigma, q[0], width):
                    children += [(sigma, alpha)] * 3 + [(sigma, _times(alpha, turn))] * 4
                else:
                    children += [(sigma, alpha)] * 5
        elif g.name == "CNOT":
            c, t = q
            for sigma, alpha in nodes:
                if _bit_of(sigma, c, width):
                    sigma ^= 1 << (width - 1 - t)
                children.append((sigma, alpha))
        elif g.name == "I":
            children = list(nodes)
        else:
            raise ValueError(g.name)
        nodes = children
    tally = Counter(nodes)
    out = {}
    for (sigma, alpha), n in tally.items():
        row = out.setdefault(sigma, [0, 0, 0, 0])
        row[UNITS[alpha]] += n
    return {s: tuple(r) for s, r in out.items()}


def dense_gate(matrix, qubits, width):
    """Full 2^width matrix of ``matrix`` on ``qubits`` (big-endian)."""
    k = len(qubits)
    rest = [q for q in range(width) if q not in qubits]
    perm = list(qubits) + rest
    full = np.kron(np.asarray(matrix, dtype=complex), np.eye(1 << (width - k)))
    full = full.reshape((2,) * (2 * width))
    inv = np.argsort(perm)
    axes = list(inv) + [width + i for i in inv]
    return full.transpose(axes).reshape(1 << width, 1 << width)


def dense_probabilities(p, x=""):
    """p_mu by full-matrix products and projectors, float arithmetic."""
    from qcountsim.statevec import _query_flip

    out = {}
    for path in p.paths(x):
        psi = np.zeros(1 << p.num_qubits, dtype=complex)
        psi[0] = 1
        outcomes = iter(path.mu)
        for g in path.gates:
            if g.kind == MEASURE:
                bit = next(outcomes)
                keep = np.array([_bit_of(s, g.qubits[0], p.num_qubits) == bit
                                 for s in range(len(psi))])
                psi = psi * keep
            elif g.kind == QUERY:
                perm = _query_flip(p.num_qubits, g, x)
                new = np.zeros_like(psi)
                new[perm] = psi
                psi = new
            else:
                psi = dense_gate(p.matrix(g.name).to_numpy(), g.qubits, p.num_qubits) @ psi
        out[path.mu] = float(np.vdot(psi, psi).real)
    return out


def grid_proj_distance(u, v, steps=20000):
    """min over a phase grid of the spectral norm, refined around the best point."""
    thetas = np.linspace(0, 2 * np.pi, steps, endpoint=False)
    vals = [np.linalg.norm(u - np.exp(1j * t) * v, 2) for t in thetas]
    k = int(np.argmin(vals))
    lo, hi = thetas[k] - 2 * np.pi / steps, thetas[k] + 2 * np.pi / steps
    for _ in range(60):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if np.linalg.norm(u - np.exp(1j * m1) * v, 2) < np.linalg.norm(u - np.exp(1j * m2) * v, 2):
            hi = m2
        else:
            lo = m1
    return float(np.linalg.norm(u - np.exp(1j * (lo + hi) / 2) * v, 2))


def fraction_total(ps):
    return sum(ps, Fraction(0))
