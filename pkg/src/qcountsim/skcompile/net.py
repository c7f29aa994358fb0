"""Epsilon-nets of short {F, Fdg, H} words with nearest-entry lookup."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from qcountsim.skcompile.distance import to_quaternion
from qcountsim.skcompile.words import ALPHABET, LETTER_MATRIX, GateWord

NET_VERSION = 1
MERGE_TOL = 1e-6
DEFAULT_DEPTH = 12
DEFAULT_ENTRY_CAP = 1 << 22
CACHE_ENV = "QCOUNTSIM_NET_CACHE"


class NetTooLargeError(RuntimeError):
    pass


def _qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Rows of ``p`` times the single quaternion ``q``, as SU(2) products."""
    a1 = p[:, 0] + 1j * p[:, 1]
    b1 = p[:, 2] + 1j * p[:, 3]
    a2 = complex(q[0], q[1])
    b2 = complex(q[2], q[3])
    a = a1 * a2 - b1 * b2.conjugate()
    b = a1 * b2 + b1 * a2.conjugate()
    return np.stack([a.real, a.imag, b.real, b.imag], axis=1)


def _signed_tree(q: np.ndarray) -> cKDTree:
    return cKDTree(np.concatenate([q, -q]))


def _dedupe(cand: np.ndarray, tol: float) -> np.ndarray:
    """Indices of a subset of ``cand`` with no two rows within ``tol`` up to sign."""
    n = len(cand)
    pairs = _signed_tree(cand).query_pairs(tol, output_type="ndarray") % n
    drop = set(int(max(i, j)) for i, j in pairs if i != j)
    return np.array([k for k in range(n) if k not in drop], dtype=np.int64)


def random_quaternions(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-uniform SU(2) elements."""
    z = rng.normal(size=(n, 4))
    return z / np.linalg.norm(z, axis=1)[:, None]


@dataclass
class EpsilonNet:
    max_length: int
    quats: np.ndarray
    parents: np.ndarray  # -1 for the empty word
    letters: np.ndarray  # index into ALPHABET, -1 for the empty word
    covering_radius: float = float("nan")
    _tree: cKDTree | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.quats)

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = _signed_tree(self.quats)
        return self._tree

    def word(self, k: int) -> GateWord:
        out = []
        while self.parents[k] >= 0:
            out.append(ALPHABET[self.letters[k]])
            k = self.parents[k]
        return GateWord(out[::-1])

    def nearest(self, u) -> tuple[GateWord, float]:
        """Closest entry to ``u`` modulo phase, with its distance."""
        d, k = self.tree.query(to_quaternion(u))
        return self.word(int(k) % len(self)), float(d)

    def measure_radius(self, samples: int = 1000, seed: int = 0) -> float:
        d, _ = self.tree.query(random_quaternions(np.random.default_rng(seed), samples))
        self.covering_radius = float(d.max())
        return self.covering_radius

    def digest(self) -> str:
        h = hashlib.sha256()
        for arr in (self.quats, self.parents, self.letters):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()[:16]

    # -- persistence

    def save(self, path: Path):
        np.savez_compressed(path, version=NET_VERSION, max_length=self.max_length,
                            quats=self.quats, parents=self.parents, letters=self.letters,
                            covering_radius=self.covering_radius, digest=self.digest())

    @classmethod
    def load(cls, path: Path) -> EpsilonNet:
        with np.load(path) as z:
            if int(z["version"]) != NET_VERSION:
                raise ValueError(f"net cache {path} has version {int(z['version'])}")
            net = cls(int(z["max_length"]), z["quats"], z["parents"], z["letters"],
                      float(z["covering_radius"]))
            if str(z["digest"]) != net.digest():
                raise ValueError(f"net cache {path} is corrupt")
        return net


def _generate(max_length: int, entry_cap: int) -> EpsilonNet:
    letter_q = [to_quaternion(LETTER_MATRIX[a]) for a in ALPHABET]
    quats = [np.array([[1.0, 0.0, 0.0, 0.0]])]
    parents = [np.array([-1])]
    letters = [np.array([-1])]
    frontier_idx = np.array([0])
    total = 1
    for _ in range(max_length):
        frontier = quats[-1]
        cand = np.concatenate([_qmul(frontier, q) for q in letter_q])
        cand_parent = np.tile(frontier_idx, len(ALPHABET))
        cand_letter = np.repeat(np.arange(len(ALPHABET)), len(frontier))
        # a product already in the net came from a word at most this long
        d, _ = _signed_tree(np.concatenate(quats)).query(cand, distance_upper_bound=MERGE_TOL)
        fresh = np.isinf(d)
        cand, cand_parent, cand_letter = cand[fresh], cand_parent[fresh], cand_letter[fresh]
        if not len(cand):
            break
        keep = _dedupe(cand, MERGE_TOL)
        if total + len(keep) > entry_cap:
            raise NetTooLargeError(f"net would exceed {entry_cap} entries")
        quats.append(cand[keep])
        parents.append(cand_parent[keep])
        letters.append(cand_letter[keep])
        frontier_idx = np.arange(total, total + len(keep))
        total += len(keep)
    return EpsilonNet(max_length, np.concatenate(quats),
                      np.concatenate(parents).astype(np.int64),
                      np.concatenate(letters).astype(np.int8))


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "qcountsim"


def cache_key(max_length: int) -> str:
    params = f"v{NET_VERSION}|{','.join(ALPHABET)}|L{max_length}|tol{MERGE_TOL!r}"
    return hashlib.sha256(params.encode()).hexdigest()[:16]


_MEMO: dict[int, EpsilonNet] = {}


def build_net(max_length: int = DEFAULT_DEPTH, entry_cap: int = DEFAULT_ENTRY_CAP,
              cache: bool | Path = True, samples: int = 1000, seed: int = 0) -> EpsilonNet:
    """Deduplicated net of all words up to ``max_length`` letters.

    Products within 1e-6 of each other modulo phase are merged, keeping the
    shorter word. The covering radius is measured on ``samples`` Haar-random
    unitaries. With ``cache`` the net is stored on disk and reloaded by key.
    """
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    if max_length in _MEMO and len(_MEMO[max_length]) <= entry_cap:
        return _MEMO[max_length]
    path = None
    if cache:
        root = cache if isinstance(cache, Path) else cache_dir()
        path = root / f"net-{cache_key(max_length)}.npz"
        if path.exists():
            try:
                net = EpsilonNet.load(path)
            except (ValueError, OSError, KeyError):
                net = None
            if net is not None and len(net) <= entry_cap:
                _MEMO[max_length] = net
                return net
    net = _generate(max_length, entry_cap)
    net.measure_radius(samples, seed)
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp.npz")
            net.save(tmp)
            os.replace(tmp, path)
        except OSError:
            pass
    _MEMO[max_length] = net
    return net
