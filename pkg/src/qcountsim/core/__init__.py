from qcountsim.core.fixedpoint import ComplexApprox, amplitude_value
from qcountsim.core.gates import (
    LIBRARY,
    UNIVERSAL,
    Gate,
    GateError,
    UnitaryMatrix,
    matrix_entry_bits,
    unitarity_check,
)
from qcountsim.core.gaussian import ExactAmplitude, GaussianInt, gaussian_mul
from qcountsim.core.literals import LiteralError, parse_literal

__all__ = [
    "ComplexApprox",
    "ExactAmplitude",
    "GaussianInt",
    "Gate",
    "GateError",
    "LIBRARY",
    "LiteralError",
    "UNIVERSAL",
    "UnitaryMatrix",
    "amplitude_value",
    "gaussian_mul",
    "matrix_entry_bits",
    "parse_literal",
    "unitarity_check",
]
