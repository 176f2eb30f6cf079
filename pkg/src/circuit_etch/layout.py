"""Place measurement patterns on a 2-D lattice.

Wire ``w`` of the circuit occupies lattice row ``2*w``; the odd rows between
wires only ever hold the middle qubit of a CNOT. Patterns are appended left
to right. A pattern's first qubit is the previous pattern's output, so a
single-qubit pattern advances its row by 4 columns and a CNOT by 6. Cells no
pattern uses are excised (measured in Z before the computation runs).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

from .circuit import Circuit, GateKind, validate
from .patterns import (
    CNOT_ROW_QUBITS,
    EXCISE,
    READOUT,
    SINGLE_ROW_QUBITS,
    WIRE,
    MeasurementLabel,
    Pattern,
    PatternCatalogue,
    pattern_for,
)

# column of the CNOT middle qubit inside its 6-column span
CNOT_MIDDLE_OFFSET = 2

INPUT_STATES = ("0", "+", "psi")


class Role(IntEnum):
    EXCISED = 0
    INPUT = 1
    WIRE = 2
    PATTERN_BODY = 3
    CNOT_MIDDLE = 4
    READOUT = 5

    @property
    def json_name(self) -> str:
        return self.name.lower()


class LayoutError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class EmptyCircuitWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LatticeCell:
    row: int
    col: int
    role: Role
    label: MeasurementLabel
    source_gate: int | None


@dataclass(frozen=True)
class Placement:
    """Where one pattern landed. ``rows`` is (row,) or (control, middle, target)."""

    gate: int
    pattern: Pattern
    rows: tuple[int, ...]
    col: int


class Lattice:
    """Dense rows x cols grid. Arrays are read-only once built."""

    def __init__(self, roles, label_ids, labels, source_gate, placements=(), input_state="0", circuit_id=""):
        self.roles = np.asarray(roles, dtype=np.int8)
        self.label_ids = np.asarray(label_ids, dtype=np.int32)
        self.labels = tuple(labels)
        self.source_gate = np.asarray(source_gate, dtype=np.int32)
        for arr in (self.roles, self.label_ids, self.source_gate):
            arr.setflags(write=False)
        self.placements = tuple(placements)
        if input_state not in INPUT_STATES:
            raise ValueError(f"input_state must be one of {INPUT_STATES}, got {input_state!r}")
        self.input_state = input_state
        self.circuit_id = circuit_id

    @property
    def rows(self) -> int:
        return self.roles.shape[0]

    @property
    def cols(self) -> int:
        return self.roles.shape[1]

    @property
    def readout_col(self) -> int:
        return self.cols - 1

    @property
    def wire_rows(self) -> tuple[int, ...]:
        return tuple(range(0, self.rows, 2))

    @property
    def n_wires(self) -> int:
        return (self.rows + 1) // 2

    @property
    def occupied(self) -> np.ndarray:
        return self.roles != Role.EXCISED

    def label_at(self, row: int, col: int) -> MeasurementLabel:
        return self.labels[self.label_ids[row, col]]

    def cell(self, row: int, col: int) -> LatticeCell:
        src = int(self.source_gate[row, col])
        return LatticeCell(row, col, Role(int(self.roles[row, col])), self.label_at(row, col), None if src < 0 else src)

    def cells(self):
        for r in range(self.rows):
            for c in range(self.cols):
                yield self.cell(r, c)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (
            np.array_equal(self.roles, other.roles)
            and np.array_equal(self.source_gate, other.source_gate)
            and [self.labels[i] for i in self.label_ids.ravel()] == [other.labels[i] for i in other.label_ids.ravel()]
        )

    def __repr__(self) -> str:
        return f"Lattice(rows={self.rows}, cols={self.cols}, excised={excision_count(self)})"


@lru_cache(maxsize=4096)
def _cached_patterns(gate, catalogue):
    return tuple(pattern_for(gate, catalogue))


class _Builder:
    def __init__(self, rows: int, cols: int):
        self.roles = np.full((rows, cols), Role.EXCISED, dtype=np.int8)
        self.label_ids = np.zeros((rows, cols), dtype=np.int32)
        self.source = np.full((rows, cols), -1, dtype=np.int32)
        self.labels: list[MeasurementLabel] = [EXCISE]
        self._ids = {EXCISE: 0}

    def ids(self, labels) -> list[int]:
        out = []
        for lab in labels:
            if lab not in self._ids:
                self._ids[lab] = len(self.labels)
                self.labels.append(lab)
            out.append(self._ids[lab])
        return out

    def pad(self, row: int, start: int, stop: int):
        """Carry a wire from column ``start`` to ``stop`` with X measurements."""
        if stop <= start:
            return
        self.label_ids[row, start:stop] = self.ids([WIRE])[0]
        self.roles[row, start + 1 : stop + 1] = Role.WIRE

    def put_row(self, row: int, col: int, labels, gate: int):
        n = len(labels)
        self.label_ids[row, col : col + n] = self.ids(labels)
        self.source[row, col : col + n] = gate
        self.roles[row, col + 1 : col + n + 1] = Role.PATTERN_BODY


def _advance(circuit: Circuit, catalogue):
    """Yield (gate index, patterns, start column) and track per-wire cursors."""
    cursor = [0] * circuit.n_wires
    for i, gate in enumerate(circuit.gates):
        pats = _cached_patterns(gate, catalogue)
        if gate.kind is GateKind.CNOT:
            start = max(cursor[gate.control], cursor[gate.target])
            yield i, gate, pats, start, tuple(cursor)
            cursor[gate.control] = cursor[gate.target] = start + CNOT_ROW_QUBITS
        else:
            start = cursor[gate.target]
            yield i, gate, pats, start, tuple(cursor)
            cursor[gate.target] = start + SINGLE_ROW_QUBITS * len(pats)
    yield None, None, (), max(cursor, default=0), tuple(cursor)


def layout(circuit: Circuit, catalogue: PatternCatalogue | None = None, input_state: str = "0") -> Lattice:
    """Lay ``circuit`` out on a lattice.

    ``input_state`` records how column 0 is prepared ("0", "+" or "psi");
    it does not change any count.
    """
    violations = validate(circuit)
    if violations:
        raise LayoutError(violations)
    if not circuit.gates:
        warnings.warn(f"circuit {circuit.id!r} has no gates; laying out bare wires", EmptyCircuitWarning, stacklevel=2)

    *_, (_, _, _, end, _) = _advance(circuit, catalogue)
    readout_col = max(end, 1)
    rows, cols = 2 * circuit.n_wires - 1, readout_col + 1
    b = _Builder(rows, cols)
    b.roles[0::2, 0] = Role.INPUT

    placements = []
    for i, gate, pats, start, cursor in _advance(circuit, catalogue):
        if gate is None:
            break
        if gate.kind is GateKind.CNOT:
            (pat,) = pats
            rc, rt = 2 * gate.control, 2 * gate.target
            rm = min(rc, rt) + 1
            b.pad(rc, cursor[gate.control], start)
            b.pad(rt, cursor[gate.target], start)
            ctrl, mid, tgt = pat.rows
            b.put_row(rc, start, ctrl, i)
            b.put_row(rt, start, tgt, i)
            mc = start + CNOT_MIDDLE_OFFSET
            b.label_ids[rm, mc] = b.ids(mid)[0]
            b.roles[rm, mc] = Role.CNOT_MIDDLE
            b.source[rm, mc] = i
            placements.append(Placement(i, pat, (rc, rm, rt), start))
        else:
            row = 2 * gate.target
            col = start
            for pat in pats:
                b.put_row(row, col, pat.labels, i)
                placements.append(Placement(i, pat, (row,), col))
                col += SINGLE_ROW_QUBITS

    *_, (_, _, _, _, final) = _advance(circuit, catalogue)
    for w, c in enumerate(final):
        b.pad(2 * w, c, readout_col)
    b.roles[0::2, readout_col] = Role.READOUT
    b.label_ids[0::2, readout_col] = b.ids([READOUT])[0]
    return Lattice(b.roles, b.label_ids, b.labels, b.source, placements, input_state, circuit.id)


def excision_count(lattice: Lattice) -> int:
    return int(np.count_nonzero(lattice.roles == Role.EXCISED))


def occupied_count(lattice: Lattice) -> int:
    return int(np.count_nonzero(lattice.roles != Role.EXCISED))


def specification(lattice: Lattice) -> list[int]:
    """Grid dimensions as ``[rows, cols]``."""
    return [lattice.rows, lattice.cols]


def lattice_to_dict(lattice: Lattice) -> dict:
    cells = []
    for r in range(lattice.rows):
        for c in range(lattice.cols):
            role = Role(int(lattice.roles[r, c]))
            lab = lattice.label_at(r, c)
            cell = {"row": r, "col": c, "role": role.json_name, "basis": lab.basis}
            if lab.in_plane:
                cell["angle"] = lab.angle
            src = int(lattice.source_gate[r, c])
            if src >= 0:
                cell["gate"] = src
            cells.append(cell)
    return {
        "id": lattice.circuit_id,
        "rows": lattice.rows,
        "cols": lattice.cols,
        "readout_col": lattice.readout_col,
        "input_state": lattice.input_state,
        "cells": cells,
    }


def lattice_from_dict(doc: dict) -> Lattice:
    """Inverse of :func:`lattice_to_dict` (pattern placements are not restored)."""
    rows, cols = int(doc["rows"]), int(doc["cols"])
    if int(doc.get("readout_col", cols - 1)) != cols - 1:
        raise ValueError("readout_col must be the last column")
    b = _Builder(rows, cols)
    seen = np.zeros((rows, cols), dtype=bool)
    names = {r.json_name: r for r in Role}
    for cell in doc["cells"]:
        r, c = int(cell["row"]), int(cell["col"])
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"cell ({r}, {c}) outside a {rows}x{cols} lattice")
        role = names[cell["role"]]
        basis = cell.get("basis", "Z")
        if basis in ("X", "Y", "XY"):
            lab = MeasurementLabel.plane(float(cell.get("angle", 0.0 if basis == "X" else 1.5707963267948966)))
        elif basis == "Mz":
            lab = READOUT
        else:
            lab = EXCISE
        b.roles[r, c] = role
        b.label_ids[r, c] = b.ids([lab])[0]
        b.source[r, c] = int(cell.get("gate", -1))
        seen[r, c] = True
    if not seen.all():
        raise ValueError("lattice document does not list every cell")
    return Lattice(b.roles, b.label_ids, b.labels, b.source, (), doc.get("input_state", "0"), doc.get("id", ""))
