"""Selects the count-table kernels: compiled when importable, else pure Python.

Set ``QCOUNTSIM_PURE_PYTHON=1`` to force the fallback.
"""

import os

from qcountsim.pathcount import _kernels_py as pure

try:
    from qcountsim.pathcount import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def select(name: str | None = None):
    if name in (None, "auto"):
        if compiled is not None and not os.environ.get("QCOUNTSIM_PURE_PYTHON"):
            return compiled
        return pure
    if name == "python":
        return pure
    if name == "cython":
        if compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")


ACTIVE = select()
