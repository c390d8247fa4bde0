"""Recurrence entanglement purification simulator for two-colorable graph states."""

__version__ = "0.1.0"

from .errors import (
    BadDistribution,
    BadParam,
    BracketError,
    DuplicateEdge,
    EmptyRegion,
    GspurifyError,
    InvalidParam,
    NegativeCoefficient,
    NoFixedPoint,
    OddCycle,
    ParseError,
    TooLarge,
    ZeroSuccess,
)
from .graphs import Graph, GraphKind, build_graph, standard_graph, syndrome_parts
from .protocol import (
    ConvMode,
    Protocol,
    PurificationTrace,
    StepResult,
    StopRule,
    Verdict,
    iterate,
    p1_step,
    p2_step,
    xor_square_over_b,
)
from .states import (
    GDState,
    PauliAxis,
    apply_pauli_channel,
    bitflip_b_noise,
    depolarizing_channel,
    global_white,
    pauli_flip_mask,
    prepared_with_channel_noise,
    pure_target,
    rho_a_family,
)

__all__ = [
    "BadDistribution",
    "BadParam",
    "BracketError",
    "ConvMode",
    "DuplicateEdge",
    "EmptyRegion",
    "GDState",
    "Graph",
    "GraphKind",
    "GspurifyError",
    "InvalidParam",
    "NegativeCoefficient",
    "NoFixedPoint",
    "OddCycle",
    "ParseError",
    "PauliAxis",
    "Protocol",
    "PurificationTrace",
    "StepResult",
    "StopRule",
    "TooLarge",
    "Verdict",
    "ZeroSuccess",
    "apply_pauli_channel",
    "bitflip_b_noise",
    "build_graph",
    "depolarizing_channel",
    "global_white",
    "iterate",
    "p1_step",
    "p2_step",
    "pauli_flip_mask",
    "prepared_with_channel_noise",
    "pure_target",
    "rho_a_family",
    "standard_graph",
    "syndrome_parts",
    "xor_square_over_b",
]
