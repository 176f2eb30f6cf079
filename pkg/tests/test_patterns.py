import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circuit_etch.circuit import Gate, GateKind
from circuit_etch.patterns import (
    CNOT_QUBITS,
    CZ_QUBITS,
    AngleClass,
    MeasurementLabel,
    PatternCatalogue,
    PatternColumn,
    classify_angle,
    default_catalogue,
    pattern_for,
)


def test_catalogue_covers_every_kind():
    cat = default_catalogue()
    assert set(cat) == {"h", "s", "sdg", "rz", "rx", "ry", "t", "tdg", "cnot"}
    assert cat["cnot"].shape == "6-1-6"
    assert all(cat[k].shape == "1x4" for k in cat if k != "cnot")


def test_catalogue_text_round_trip():
    cat = default_catalogue()
    again = PatternCatalogue.parse(cat.dumps())
    assert {k: again[k] for k in again} == {k: cat[k] for k in cat}


@pytest.mark.parametrize(
    "text",
    ["h\t1x4\tX Y Y", "h\t2x2\tX Y Y Y", "h 1x4 X Y Y Y", "cnot\t6-1-6\tX X | Y | Y"],
)
def test_bad_catalogue_lines(text):
    with pytest.raises(ValueError):
        PatternCatalogue.parse(text)


def test_pattern_sizes():
    assert CNOT_QUBITS == 13 and CZ_QUBITS == 8
    (cnot,) = pattern_for(Gate(GateKind.CNOT, 1, 0))
    assert cnot.qubit_count == 13 and cnot.column is PatternColumn.CNOT
    assert [len(r) for r in cnot.rows] == [6, 1, 6]
    for kind in ("h", "s", "sdg", "t", "tdg"):
        (p,) = pattern_for(Gate(GateKind(kind), 0))
        assert p.qubit_count == 4


@pytest.mark.parametrize(
    "gate, column, non_pauli",
    [
        (Gate(GateKind.H, 0), PatternColumn.CLIFFORD4, 0),
        (Gate(GateKind.S, 0), PatternColumn.CLIFFORD4, 0),
        (Gate(GateKind.SDG, 0), PatternColumn.CLIFFORD4, 0),
        (Gate(GateKind.T, 0), PatternColumn.T4, 1),
        (Gate(GateKind.TDG, 0), PatternColumn.T4, 1),
        (Gate(GateKind.RZ, 0, None, (0.3,)), PatternColumn.ZROT4, 1),
        (Gate(GateKind.RX, 0, None, (0.3,)), PatternColumn.ZROT4, 1),
        (Gate(GateKind.RZ, 0, None, (Fraction(1, 2),)), PatternColumn.CLIFFORD4, 0),
        (Gate(GateKind.RZ, 0, None, (math.pi,)), PatternColumn.CLIFFORD4, 0),
        (Gate(GateKind.CNOT, 0, 1), PatternColumn.CNOT, 0),
    ],
)
def test_pattern_column_and_non_pauli(gate, column, non_pauli):
    (p,) = pattern_for(gate)
    assert p.column is column
    assert p.non_pauli_count == non_pauli == sum(not lab.is_pauli for lab in p.labels)


def test_urot_expands_to_three_rotations():
    pats = pattern_for(Gate(GateKind.UROT, 0, None, (0.1, Fraction(1, 2), 0.3)))
    assert [p.kind for p in pats] == ["rz", "rx", "rz"]
    assert [p.column for p in pats] == [PatternColumn.ZROT4, PatternColumn.CLIFFORD4, PatternColumn.ZROT4]


@pytest.mark.parametrize(
    "angle, text",
    [(0.0, "X"), (math.pi, "-X"), (-math.pi, "-X"), (math.pi / 2, "Y"), (-math.pi / 2, "-Y"), (5 * math.pi / 2, "Y"), (0.3, "XY(0.3)")],
)
def test_label_snapping(angle, text):
    assert str(MeasurementLabel.plane(angle)) == text


@given(st.floats(-20, 20))
def test_classify_matches_snapping(theta):
    lab = MeasurementLabel.plane(theta)
    assert (classify_angle(theta) is AngleClass.CLIFFORD) == lab.is_pauli


def test_replace_swaps_one_entry():
    cat = default_catalogue()
    bad = cat.replace("s", ["X", "X", "Y", "X"])
    assert bad["s"].tokens == ("X", "X", "Y", "X")
    assert bad["h"] == cat["h"]
    assert cat["s"].tokens == ("X", "X", "-Y", "X")
