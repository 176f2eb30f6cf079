"""Transpile gate-list circuits into etched 2-D graph-state lattices for MBQC."""

__version__ = "0.1.0"

from .circuit import Circuit, CircuitFormatError, Gate, GateKind, parse_circuit, serialize_circuit, validate
from .graph_state import GraphState, PauliString, build_graph_state, stabilizer_generators
from .iqp import IqpSpec, generate_iqp, run_batch, summarize
from .layout import Lattice, Role, layout
from .metrics import UNDEFINED, MetricsRow, format_ratio, metrics_row
from .oracle import equivalent, simulate_mbqc
from .patterns import MeasurementLabel, Pattern, default_catalogue, load_catalogue, pattern_for

__all__ = [
    "Circuit",
    "CircuitFormatError",
    "Gate",
    "GateKind",
    "GraphState",
    "IqpSpec",
    "Lattice",
    "MeasurementLabel",
    "MetricsRow",
    "Pattern",
    "PauliString",
    "Role",
    "UNDEFINED",
    "build_graph_state",
    "default_catalogue",
    "equivalent",
    "format_ratio",
    "generate_iqp",
    "layout",
    "load_catalogue",
    "metrics_row",
    "parse_circuit",
    "pattern_for",
    "run_batch",
    "serialize_circuit",
    "simulate_mbqc",
    "stabilizer_generators",
    "summarize",
    "validate",
]
