"""Native-gate circuit synthesis and optimization for cross-resonance hardware."""

__version__ = "0.1.0"

from .circuit import Circuit, CouplingMap, DeviceModel, Gate, unitary_of
from .errors import (
    CircuitFormatError,
    ConfigurationError,
    InvalidInputError,
    LMDivergedError,
    PulseforgeError,
    RoutingError,
)
from .library import builtin
from .linalg import avg_gate_fidelity, phase_equivalent, trace_infidelity
from .metrics import CONVENTIONS, ProxyReport, proxies, schedule_asap
from .transpile import decompose_ccx

__all__ = [
    "__version__", "Circuit", "CouplingMap", "DeviceModel", "Gate", "unitary_of",
    "CircuitFormatError", "ConfigurationError", "InvalidInputError", "LMDivergedError",
    "PulseforgeError", "RoutingError", "builtin", "avg_gate_fidelity", "phase_equivalent",
    "trace_infidelity", "CONVENTIONS", "ProxyReport", "proxies", "schedule_asap",
    "decompose_ccx",
]
