"""Measurement-pattern footprints for each gate kind.

The label tables live in ``data/patterns.tsv`` so they can be corrected
without touching code. A single-qubit pattern measures 4 qubits along one
row; the CNOT measures 6 qubits on the control row, 1 qubit between the
rows and 6 on the target row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping

from .circuit import Angle, Gate, GateKind, parse_angle, to_radians

ANGLE_TOL = 1e-12

SINGLE_ROW = "1x4"
THREE_ROW = "6-1-6"
SINGLE_ROW_QUBITS = 4
CNOT_ROW_QUBITS = 6
CNOT_QUBITS = 2 * CNOT_ROW_QUBITS + 1
CZ_QUBITS = 8


class AngleClass(str, Enum):
    CLIFFORD = "Clifford"
    NON_CLIFFORD = "NonClifford"


class PatternColumn(str, Enum):
    """Table columns a pattern is tallied under."""

    CLIFFORD4 = "Clifford_4"
    CNOT = "CNOT_6-1-6"
    ZROT4 = "arbitrary Z-rotation_4"
    T4 = "T_4/Tdg_4"


def classify_angle(theta: Angle) -> AngleClass:
    """Clifford iff ``theta`` is a multiple of pi/2."""
    if isinstance(theta, Fraction):
        return AngleClass.CLIFFORD if (2 * theta).denominator == 1 else AngleClass.NON_CLIFFORD
    x = float(theta)
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {theta!r}")
    quarters = x / (math.pi / 2)
    off = abs(quarters - round(quarters)) * (math.pi / 2)
    return AngleClass.CLIFFORD if off <= ANGLE_TOL else AngleClass.NON_CLIFFORD


def _wrap(angle: float) -> float:
    """Map to (-pi, pi]."""
    a = math.remainder(angle, 2 * math.pi)
    return math.pi if a <= -math.pi + ANGLE_TOL else a


@dataclass(frozen=True)
class MeasurementLabel:
    """How one lattice qubit is measured.

    ``basis`` is ``"X"``, ``"Y"`` or ``"XY"`` for measurements in the XY plane
    (with ``angle`` the plane angle), ``"Z"`` for excision and ``"Mz"`` for
    computational-basis readout. Plane measurements at multiples of pi/2 are
    always stored as X or Y; the angle keeps the sign (pi is -X, -pi/2 is -Y).
    """

    basis: str
    angle: float = 0.0

    @classmethod
    def plane(cls, angle: float) -> "MeasurementLabel":
        a = _wrap(float(angle))
        for snap, basis in ((0.0, "X"), (math.pi, "X"), (math.pi / 2, "Y"), (-math.pi / 2, "Y")):
            if abs(a - snap) <= ANGLE_TOL:
                return cls(basis, snap)
        return cls("XY", a)

    @property
    def in_plane(self) -> bool:
        return self.basis in ("X", "Y", "XY")

    @property
    def is_pauli(self) -> bool:
        return self.basis != "XY"

    def __str__(self) -> str:
        if self.basis == "X":
            return "-X" if self.angle else "X"
        if self.basis == "Y":
            return "-Y" if self.angle < 0 else "Y"
        if self.basis == "XY":
            return f"XY({self.angle:.12g})"
        return self.basis


WIRE = MeasurementLabel("X", 0.0)
EXCISE = MeasurementLabel("Z")
READOUT = MeasurementLabel("Mz")


@dataclass(frozen=True)
class Pattern:
    kind: str
    qubit_count: int
    shape: str
    labels: tuple[MeasurementLabel, ...]
    non_pauli_count: int
    column: PatternColumn

    @property
    def rows(self) -> tuple[tuple[MeasurementLabel, ...], ...]:
        """Labels split by lattice row (control, middle, target for a CNOT)."""
        if self.shape == SINGLE_ROW:
            return (self.labels,)
        k = CNOT_ROW_QUBITS
        return self.labels[:k], self.labels[k : k + 1], self.labels[k + 1 :]


_PAULI_TOKENS = {"X": 0.0, "-X": math.pi, "Y": math.pi / 2, "-Y": -math.pi / 2}


def _token_angle(token: str, theta: float | None) -> float:
    if token in _PAULI_TOKENS:
        return _PAULI_TOKENS[token]
    if token in ("theta", "+theta", "-theta"):
        if theta is None:
            raise ValueError(f"label {token!r} needs a gate angle")
        return -theta if token.startswith("-") else theta
    return to_radians(parse_angle(token))


@dataclass(frozen=True)
class CatalogueEntry:
    kind: str
    shape: str
    tokens: tuple[str, ...]

    def labels(self, theta: float | None = None) -> tuple[MeasurementLabel, ...]:
        return tuple(MeasurementLabel.plane(_token_angle(t, theta)) for t in self.tokens)


class PatternCatalogue:
    """Read-only mapping from gate kind name to its catalogue entry."""

    def __init__(self, entries: Mapping[str, CatalogueEntry]):
        self._entries = MappingProxyType(dict(entries))
        for entry in self._entries.values():
            want = SINGLE_ROW_QUBITS if entry.shape == SINGLE_ROW else CNOT_QUBITS
            if len(entry.tokens) != want:
                raise ValueError(f"{entry.kind}: shape {entry.shape} needs {want} labels, got {len(entry.tokens)}")

    def __getitem__(self, kind: str) -> CatalogueEntry:
        return self._entries[kind]

    def __contains__(self, kind: object) -> bool:
        return kind in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def replace(self, kind: str, tokens) -> "PatternCatalogue":
        """Copy with one entry's labels swapped out."""
        entries = dict(self._entries)
        old = entries[kind]
        entries[kind] = CatalogueEntry(kind, old.shape, tuple(tokens))
        return PatternCatalogue(entries)

    @classmethod
    def parse(cls, text: str) -> "PatternCatalogue":
        entries = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"catalogue line {lineno}: expected kind, shape, labels")
            kind, shape, labels = (p.strip() for p in parts)
            if shape not in (SINGLE_ROW, THREE_ROW):
                raise ValueError(f"catalogue line {lineno}: unknown shape {shape!r}")
            tokens = tuple(t for t in labels.replace("|", " ").split())
            entries[kind] = CatalogueEntry(kind, shape, tokens)
        return cls(entries)

    def dumps(self) -> str:
        lines = []
        for entry in self._entries.values():
            tokens = list(entry.tokens)
            if entry.shape == THREE_ROW:
                k = CNOT_ROW_QUBITS
                tokens = tokens[:k] + ["|"] + tokens[k : k + 1] + ["|"] + tokens[k + 1 :]
            lines.append(f"{entry.kind}\t{entry.shape}\t{' '.join(tokens)}")
        return "\n".join(lines) + "\n"


def load_catalogue(path=None) -> PatternCatalogue:
    if path is None:
        return default_catalogue()
    with open(path, encoding="utf-8") as fh:
        return PatternCatalogue.parse(fh.read())


@lru_cache(maxsize=1)
def default_catalogue() -> PatternCatalogue:
    text = resources.files("circuit_etch").joinpath("data/patterns.tsv").read_text(encoding="utf-8")
    return PatternCatalogue.parse(text)


def _make(kind: str, entry: CatalogueEntry, column: PatternColumn, theta: float | None = None) -> Pattern:
    labels = entry.labels(theta)
    return Pattern(
        kind=kind,
        qubit_count=len(labels),
        shape=entry.shape,
        labels=labels,
        non_pauli_count=sum(not lab.is_pauli for lab in labels),
        column=column,
    )


def _rotation(kind: str, theta: Angle, catalogue: PatternCatalogue) -> Pattern:
    column = PatternColumn.CLIFFORD4 if classify_angle(theta) is AngleClass.CLIFFORD else PatternColumn.ZROT4
    return _make(kind, catalogue[kind], column, to_radians(theta))


def pattern_for(gate: Gate, catalogue: PatternCatalogue | None = None) -> list[Pattern]:
    """Patterns realising ``gate``, in the order they are laid out.

    A general rotation with Euler angles ``(a, b, c)`` is Rz(c).Rx(b).Rz(a)
    and expands to three single-row patterns, applied a first.
    """
    cat = catalogue or default_catalogue()
    kind = gate.kind
    if kind is GateKind.CNOT:
        return [_make(kind.value, cat[kind.value], PatternColumn.CNOT)]
    if kind in (GateKind.T, GateKind.TDG):
        return [_make(kind.value, cat[kind.value], PatternColumn.T4)]
    if kind in (GateKind.H, GateKind.S, GateKind.SDG):
        return [_make(kind.value, cat[kind.value], PatternColumn.CLIFFORD4)]
    if kind is GateKind.UROT:
        a, b, c = gate.angles
        return [_rotation("rz", a, cat), _rotation("rx", b, cat), _rotation("rz", c, cat)]
    (theta,) = gate.angles
    return [_rotation(kind.value, theta, cat)]
