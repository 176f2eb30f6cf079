"""Resource counts for etched lattices and the magic-state distillation model.

A metrics row counts qubits of the lattice by pattern type. Its Pauli column
is every graph-state qubit measured in a Pauli basis, and the distillation
ratio is Pauli qubits per non-Pauli qubit. The ratio is an exact
:class:`~fractions.Fraction`, or :data:`UNDEFINED` when the lattice has no
non-Pauli qubits.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

from .circuit import Circuit
from .layout import Lattice, excision_count, layout, specification
from .patterns import CNOT_QUBITS, CZ_QUBITS, PatternColumn

DISTILLATION_TARGET = 11
DEFAULT_TOLERANCE = 25


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __str__(self) -> str:
        return "—"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()
Ratio = Union[Fraction, _Undefined]


class UndefinedRatio(ValueError):
    pass


class InvalidLevel(ValueError):
    pass


def ratio_of(pauli: int, non_pauli: int) -> Ratio:
    return Fraction(pauli, non_pauli) if non_pauli > 0 else UNDEFINED


def format_ratio(ratio: Ratio) -> str:
    """``"362.8 : 1"``; whole ratios drop the decimal, undefined prints a dash."""
    if ratio is UNDEFINED:
        return str(UNDEFINED)
    if ratio.denominator == 1:
        return f"{ratio.numerator} : 1"
    return f"{float(ratio):.1f} : 1"


@dataclass(frozen=True)
class MetricsRow:
    circuit_id: str
    specification: tuple[int, int]
    lattice: int
    clifford4: int
    cnot: int
    zrot4: int
    t4: int
    excised: int
    graph_state: int
    pauli: int
    ratio: Ratio

    @property
    def non_pauli(self) -> int:
        return self.zrot4 + self.t4

    def check(self) -> list[str]:
        """Broken column identities, if any."""
        rows, cols = self.specification
        problems = []
        if self.lattice != rows * cols:
            problems.append("lattice != rows * cols")
        if self.graph_state != self.lattice - self.excised:
            problems.append("graph_state != lattice - excised")
        if self.pauli != self.graph_state - self.non_pauli:
            problems.append("pauli != graph_state - (zrot4 + t4)")
        if self.ratio != ratio_of(self.pauli, self.non_pauli):
            problems.append("ratio != pauli / (zrot4 + t4)")
        return problems


def make_row(circuit_id, spec, clifford4, cnot, zrot4, t4, excised) -> MetricsRow:
    """Assemble a row from the raw counts; derived columns are computed here."""
    rows, cols = spec
    lattice = rows * cols
    graph_state = lattice - excised
    pauli = graph_state - (zrot4 + t4)
    return MetricsRow(circuit_id, (rows, cols), lattice, clifford4, cnot, zrot4, t4, excised, graph_state, pauli,
                      ratio_of(pauli, zrot4 + t4))


def pattern_counts(lattice: Lattice) -> Counter:
    return Counter(p.pattern.column for p in lattice.placements)


def metrics_row(circuit: Circuit, lattice: Lattice | None = None) -> MetricsRow:
    if lattice is None:
        lattice = layout(circuit)
    counts = pattern_counts(lattice)
    return make_row(
        circuit.id,
        specification(lattice),
        counts[PatternColumn.CLIFFORD4],
        counts[PatternColumn.CNOT],
        counts[PatternColumn.ZROT4],
        counts[PatternColumn.T4],
        excision_count(lattice),
    )


def meets_target(ratio: Ratio, tolerance=DEFAULT_TOLERANCE) -> bool:
    """True when the ratio is within tolerance (at most ``tolerance`` : 1)."""
    if ratio is UNDEFINED:
        raise UndefinedRatio("ratio is undefined: the lattice has no non-Pauli qubits")
    return ratio <= tolerance


def tfactory_error(p: float, level: int) -> float:
    """Leading-order output error of 15-to-1 distillation, once or concatenated."""
    if not 0 <= p <= 1:
        raise ValueError(f"error rate must lie in [0, 1], got {p!r}")
    if level == 1:
        return 35 * p**3
    if level == 2:
        return 35 * (35 * p**3) ** 3
    raise InvalidLevel(f"level must be 1 or 2, got {level!r}")


class Protocol(str, Enum):
    FIFTEEN_TO_ONE = "15-to-1"
    CONCATENATED_176 = "concatenated-176"
    CONCATENATED_225 = "concatenated-225"


_TILES = {Protocol.FIFTEEN_TO_ONE: 15, Protocol.CONCATENATED_176: 176, Protocol.CONCATENATED_225: 225}
_BLOCKS = {Protocol.CONCATENATED_176: (11, 21), Protocol.CONCATENATED_225: (15, 15)}


@dataclass(frozen=True)
class TFactoryModel:
    protocol: Protocol

    @property
    def tiles(self) -> int:
        return _TILES[self.protocol]

    @property
    def block_dims(self) -> tuple[int, int] | None:
        return _BLOCKS.get(self.protocol)

    @property
    def level(self) -> int:
        return 1 if self.protocol is Protocol.FIFTEEN_TO_ONE else 2

    def error(self, p: float) -> float:
        return tfactory_error(p, self.level)


def tfactory_footprint(model: TFactoryModel) -> int:
    return model.tiles


def whatif_substitute_cz(row: MetricsRow) -> MetricsRow:
    """Recount as if every 13-qubit CNOT pattern were an 8-qubit CZ pattern."""
    saved = (CNOT_QUBITS - CZ_QUBITS) * row.cnot
    graph_state = row.graph_state - saved
    pauli = row.pauli - saved
    return replace(row, graph_state=graph_state, pauli=pauli, ratio=ratio_of(pauli, row.non_pauli))


def whatif_halve_pauli(row: MetricsRow) -> Fraction:
    if row.non_pauli == 0:
        raise UndefinedRatio("ratio is undefined: the row has no non-Pauli qubits")
    return Fraction(row.pauli // 2, row.non_pauli)


CSV_HEADER = (
    "circuit id",
    "specification",
    "lattice",
    "Clifford_4",
    "CNOT_6-1-6",
    "arbitrary Z-rotation_4",
    "T_4/Tdg_4",
    "excised Z-measurements",
    "graph state",
    "Pauli",
    "Pauli:non-Pauli",
)


def row_cells(row: MetricsRow) -> list[str]:
    rows, cols = row.specification
    return [
        row.circuit_id,
        f"[{rows}, {cols}]",
        str(row.lattice),
        str(row.clifford4),
        str(row.cnot),
        str(row.zrot4),
        str(row.t4),
        str(row.excised),
        str(row.graph_state),
        str(row.pauli),
        format_ratio(row.ratio),
    ]


def write_csv(rows: Iterable, fh=None) -> str:
    """Render rows as CSV. Non-row entries (batch errors) become an ``ERROR`` line."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        if isinstance(row, MetricsRow):
            w.writerow(row_cells(row))
        else:
            w.writerow([getattr(row, "circuit_id", ""), "ERROR", str(row)] + [""] * (len(CSV_HEADER) - 3))
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def _parse_ratio(text: str) -> Ratio:
    if text.strip() == str(UNDEFINED):
        return UNDEFINED
    return Fraction(text.split(":")[0].strip())


def read_csv(text: str) -> list[MetricsRow]:
    """Read rows written by :func:`write_csv`; rounded ratios are recomputed from the counts."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    out = []
    for cells in reader:
        if len(cells) < 2 or cells[1] == "ERROR":
            continue
        spec = tuple(int(x) for x in cells[1].strip("[]").split(","))
        nums = [int(x) for x in cells[3:8]]
        out.append(make_row(cells[0], spec, *nums))
    return out
