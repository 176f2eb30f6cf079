"""Gate-list circuits: the transpiler input.

Wires are numbered from 0, top to bottom. Angles are kept either as a
:class:`fractions.Fraction` (an exact multiple of pi, produced when the
document spells the angle symbolically, e.g. ``"pi/4"``) or as a plain
``float`` in radians.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Union

Angle = Union[Fraction, float]


class GateKind(str, Enum):
    H = "h"
    S = "s"
    SDG = "sdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    UROT = "urot"
    T = "t"
    TDG = "tdg"
    CNOT = "cnot"

    @property
    def arity(self) -> int:
        """Number of angles the gate carries."""
        if self in (GateKind.RX, GateKind.RY, GateKind.RZ):
            return 1
        if self is GateKind.UROT:
            return 3
        return 0


class CircuitFormatError(ValueError):
    """Base class for problems reading a circuit document."""

    def __init__(self, message: str, gate: int | None = None):
        self.gate = gate
        if gate is not None:
            message = f"gate {gate}: {message}"
        super().__init__(message)


class MalformedDocument(CircuitFormatError):
    pass


class UnknownGateKind(CircuitFormatError):
    pass


class MissingField(CircuitFormatError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    control: int | None = None
    angles: tuple[Angle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "angles", tuple(self.angles))

    @property
    def wires(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    @property
    def radians(self) -> tuple[float, ...]:
        return tuple(to_radians(a) for a in self.angles)


@dataclass(frozen=True)
class Circuit:
    n_wires: int
    gates: tuple[Gate, ...] = ()
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Violation:
    """One reason a circuit cannot be etched. ``gate`` is -1 for circuit-level problems."""

    kind: str
    gate: int
    message: str = field(default="", compare=False)

    def __str__(self) -> str:
        where = "circuit" if self.gate < 0 else f"gate {self.gate}"
        return f"{self.kind} at {where}: {self.message}".rstrip(": ")


def to_radians(angle: Angle) -> float:
    if isinstance(angle, Fraction):
        return float(angle) * math.pi
    return float(angle)


_SYMBOLIC = re.compile(r"^\s*(?P<sign>[+-]?)\s*(?:(?P<num>\d+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_angle(value: Any, gate: int | None = None) -> Angle:
    """Read a JSON angle: a number (radians) or a symbolic multiple of pi."""
    if isinstance(value, bool):
        raise MalformedDocument(f"angle must be a number or symbolic string, got {value!r}", gate)
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise MalformedDocument(f"angle must be finite, got {value!r}", gate)
        return float(value)
    if isinstance(value, str):
        m = _SYMBOLIC.match(value)
        if m is None:
            raise MalformedDocument(f"cannot read angle {value!r}", gate)
        frac = Fraction(int(m["num"] or 1), int(m["den"] or 1))
        return -frac if m["sign"] == "-" else frac
    raise MalformedDocument(f"angle must be a number or symbolic string, got {value!r}", gate)


def format_angle(angle: Angle) -> float | str:
    if not isinstance(angle, Fraction):
        return float(angle)
    sign = "-" if angle < 0 else ""
    num, den = abs(angle.numerator), angle.denominator
    text = "pi" if num == 1 else f"{num}*pi"
    if den != 1:
        text += f"/{den}"
    return sign + text


def _require(entry: dict, key: str, index: int) -> Any:
    if key not in entry:
        raise MissingField(f"missing field {key!r}", index)
    return entry[key]


def _as_int(value: Any, key: str, index: int | None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedDocument(f"{key!r} must be an integer, got {value!r}", index)
    return value


def _parse_gate(entry: Any, index: int) -> Gate:
    if not isinstance(entry, dict):
        raise MalformedDocument("gate entry must be an object", index)
    name = _require(entry, "type", index)
    try:
        kind = GateKind(str(name).lower())
    except ValueError:
        raise UnknownGateKind(f"unknown gate kind {name!r}", index) from None
    target = _as_int(_require(entry, "target", index), "target", index)
    control = None
    if kind is GateKind.CNOT:
        control = _as_int(_require(entry, "control", index), "control", index)
    elif "control" in entry:
        control = _as_int(entry["control"], "control", index)

    angles: tuple[Angle, ...] = ()
    if kind is GateKind.UROT:
        raw = _require(entry, "angles", index)
        if not isinstance(raw, list):
            raise MalformedDocument("'angles' must be a list", index)
        angles = tuple(parse_angle(a, index) for a in raw)
    elif kind.arity == 1:
        if "angle" in entry:
            angles = (parse_angle(entry["angle"], index),)
        elif "angles" in entry and isinstance(entry["angles"], list):
            # kept so validate() can report the arity problem
            angles = tuple(parse_angle(a, index) for a in entry["angles"])
        else:
            raise MissingField("missing field 'angle'", index)
    elif "angles" in entry and isinstance(entry["angles"], list):
        angles = tuple(parse_angle(a, index) for a in entry["angles"])
    return Gate(kind, target, control, angles)


def parse_circuit(text: str | bytes) -> Circuit:
    """Parse a JSON circuit document.

    Raises :class:`MalformedDocument`, :class:`UnknownGateKind` or
    :class:`MissingField`; gate-level errors carry the gate index.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be an object")
    if "qubits" not in doc:
        raise MissingField("missing field 'qubits'")
    if "gates" not in doc:
        raise MissingField("missing field 'gates'")
    n_wires = _as_int(doc["qubits"], "qubits", None)
    gates = doc["gates"]
    if not isinstance(gates, list):
        raise MalformedDocument("'gates' must be a list")
    return Circuit(n_wires, tuple(_parse_gate(g, i) for i, g in enumerate(gates)), str(doc.get("id", "")))


def circuit_to_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry: dict[str, Any] = {"type": g.kind.value, "target": g.target}
        if g.control is not None:
            entry["control"] = g.control
        if g.kind.arity == 1 and len(g.angles) == 1:
            entry["angle"] = format_angle(g.angles[0])
        elif g.angles:
            entry["angles"] = [format_angle(a) for a in g.angles]
        gates.append(entry)
    return {"id": circuit.id, "qubits": circuit.n_wires, "gates": gates}


def serialize_circuit(circuit: Circuit, indent: int | None = None) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=indent)


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def validate(circuit: Circuit) -> list[Violation]:
    """Return every reason ``circuit`` cannot be laid out; empty means valid."""
    out: list[Violation] = []
    n = circuit.n_wires
    if n < 1:
        out.append(Violation("WireCount", -1, f"need at least one wire, got {n}"))
    for i, g in enumerate(circuit.gates):
        for w in g.wires:
            if not 0 <= w < max(n, 0):
                out.append(Violation("WireOutOfRange", i, f"wire {w} outside [0, {n})"))
        if g.kind is GateKind.CNOT:
            if g.control is None:
                out.append(Violation("MissingControl", i, "CNOT needs a control wire"))
            elif g.control == g.target:
                out.append(Violation("ControlIsTarget", i, f"control and target are both {g.target}"))
            elif abs(g.control - g.target) != 1:
                out.append(
                    Violation("NonAdjacentCNOT", i, f"control {g.control} and target {g.target} are not neighbours")
                )
        elif g.control is not None:
            out.append(Violation("UnexpectedControl", i, f"{g.kind.value} takes no control wire"))
        if len(g.angles) != g.kind.arity:
            out.append(Violation("AngleArity", i, f"{g.kind.value} takes {g.kind.arity} angle(s), got {len(g.angles)}"))
        for a in g.angles:
            if not math.isfinite(to_radians(a)):
                out.append(Violation("AngleNotFinite", i, f"angle {a!r}"))
    return out
