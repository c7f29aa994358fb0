from qcountsim.program.dsl import DSLError, format_program, parse_program
from qcountsim.program.model import (
    Apply,
    BranchingProgram,
    IfInput,
    Measure,
    OutcomeHistory,
    ProgramError,
    Verdict,
    gate_at,
    input_bit,
)
from qcountsim.program.passes import NotNormalizedError, ProgramProfile, gate_profile, normalize, profile

__all__ = [
    "Apply",
    "BranchingProgram",
    "DSLError",
    "IfInput",
    "Measure",
    "NotNormalizedError",
    "OutcomeHistory",
    "ProgramError",
    "ProgramProfile",
    "Verdict",
    "format_program",
    "gate_at",
    "gate_profile",
    "input_bit",
    "normalize",
    "parse_program",
    "profile",
]
