"""Small dense-matrix helpers: operator norm and seeded random unitaries."""

from __future__ import annotations

import numpy as np


def op_norm(m: np.ndarray, tol: float = 1e-12, max_iter: int = 2000, seed: int = 0) -> float:
    """Largest singular value by power iteration on M†M."""
    m = np.asarray(m, dtype=complex)
    if not m.any():
        return 0.0
    gram = m.conj().T @ m
    rng = np.random.default_rng(seed)
    v = rng.normal(size=gram.shape[0]) + 1j * rng.normal(size=gram.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector in the kernel; restart along the largest column
            v = gram[:, np.argmax(np.linalg.norm(gram, axis=0))]
            v = v / np.linalg.norm(v)
            continue
        new = float(np.vdot(v, w).real)
        v = w / nw
        if abs(new - lam) <= tol * max(new, 1e-300):
            lam = new
            break
        lam = new
    return float(np.sqrt(max(lam, 0.0)))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian matrix with phase fix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
