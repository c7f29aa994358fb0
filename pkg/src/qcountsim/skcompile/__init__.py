from qcountsim.skcompile.distance import NotUnitaryError, proj_distance
from qcountsim.skcompile.net import EpsilonNet, NetTooLargeError, build_net
from qcountsim.skcompile.pipeline import CompileReport, compile_program, compile_with_report
from qcountsim.skcompile.sk import SKFloorError, group_commutator_decompose, sk_approx, sk_search
from qcountsim.skcompile.words import GateWord

__all__ = [
    "CompileReport",
    "EpsilonNet",
    "GateWord",
    "NetTooLargeError",
    "NotUnitaryError",
    "SKFloorError",
    "build_net",
    "compile_program",
    "compile_with_report",
    "group_commutator_decompose",
    "proj_distance",
    "sk_approx",
    "sk_search",
]
