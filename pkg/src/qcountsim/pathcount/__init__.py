from qcountsim.pathcount.counting import (
    CountVector,
    branch_probability,
    count_paths,
    m_plus_minus,
    path_gates,
)
from qcountsim.pathcount.threshold import (
    ThresholdReport,
    count_branches,
    dummy_path_counts,
    enumerate_dummy_paths,
    guess_budget,
    n_totals,
    threshold_decide,
)

__all__ = [
    "CountVector",
    "ThresholdReport",
    "branch_probability",
    "count_branches",
    "count_paths",
    "dummy_path_counts",
    "enumerate_dummy_paths",
    "guess_budget",
    "m_plus_minus",
    "n_totals",
    "path_gates",
    "threshold_decide",
]
