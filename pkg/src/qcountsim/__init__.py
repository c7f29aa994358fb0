"""Exact simulation of classically-controlled quantum programs by path counting."""

from qcountsim.program import BranchingProgram, format_program, normalize, parse_program
from qcountsim.pathcount import count_paths, threshold_decide
from qcountsim.statevec import accept_probability, enumerate_branches

__version__ = "0.1.0"

__all__ = [
    "BranchingProgram",
    "accept_probability",
    "count_paths",
    "enumerate_branches",
    "format_program",
    "normalize",
    "parse_program",
    "threshold_decide",
]
