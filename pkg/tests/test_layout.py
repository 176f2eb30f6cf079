import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from circuit_etch.circuit import Circuit, Gate, GateKind
from circuit_etch.layout import EmptyCircuitWarning, LayoutError, Role, excision_count, lattice_from_dict, lattice_to_dict, layout, specification
from circuit_etch.metrics import metrics_row

from conftest import circ, random_gate

WIDTH = {"urot": 12, "cnot": 6}


def expected_shape(circuit):
    """Column bookkeeping done by hand: each wire keeps a cursor."""
    cur = [0] * circuit.n_wires
    for g in circuit.gates:
        if g.kind is GateKind.CNOT:
            start = max(cur[g.control], cur[g.target])
            cur[g.control] = cur[g.target] = start + 6
        else:
            cur[g.target] += WIDTH.get(g.kind.value, 4)
    cols = max(max(cur), 1) + 1
    return 2 * circuit.n_wires - 1, cols


def test_ghz3_lattice(ghz3):
    lat = layout(ghz3)
    # H: cols 0-3 on row 0; CNOT(0,1) cols 4-9, middle (1, 6);
    # CNOT(1,2) starts at 10, middle (3, 12); readout at 16.
    assert specification(lat) == [5, 17]
    assert lat.readout_col == 16
    assert lat.roles[1, 6] == Role.CNOT_MIDDLE and lat.roles[3, 12] == Role.CNOT_MIDDLE
    assert excision_count(lat) == 85 - 3 * 17 - 2 == 32
    assert list(lat.roles[0::2, 16]) == [Role.READOUT] * 3
    assert list(lat.roles[0::2, 0]) == [Role.INPUT] * 3
    # wire padding on row 4 before the second CNOT
    assert all(str(lat.label_at(4, c)) == "X" for c in range(0, 10))
    assert all(lat.roles[4, c] == Role.WIRE for c in range(1, 11))


def test_single_gate_shapes(quiet):
    assert specification(layout(circ(1, {"type": "h", "target": 0}))) == [1, 5]
    assert specification(layout(circ(2, {"type": "cnot", "control": 1, "target": 0}))) == [3, 7]
    assert specification(layout(circ(1, {"type": "urot", "target": 0, "angles": [0.1, 0.2, 0.3]}))) == [1, 13]
    assert specification(layout(circ(1))) == [1, 2]


def test_cnot_labels_follow_control():
    down = layout(circ(2, {"type": "cnot", "control": 0, "target": 1}))
    up = layout(circ(2, {"type": "cnot", "control": 1, "target": 0}))
    assert [str(down.label_at(0, c)) for c in range(6)] == [str(up.label_at(2, c)) for c in range(6)]
    assert [str(down.label_at(2, c)) for c in range(6)] == [str(up.label_at(0, c)) for c in range(6)]


def test_empty_circuit_warns():
    with pytest.warns(EmptyCircuitWarning):
        lat = layout(circ(2))
    assert lat.readout_col == 1


def test_invalid_circuit_raises():
    with pytest.raises(LayoutError) as info:
        layout(Circuit(3, (Gate(GateKind.CNOT, 2, 0),)))
    assert [v.kind for v in info.value.violations] == ["NonAdjacentCNOT"]


def test_input_state_is_recorded_only(ghz3):
    a, b = layout(ghz3, input_state="0"), layout(ghz3, input_state="psi")
    assert a == b and b.input_state == "psi"
    with pytest.raises(ValueError):
        layout(ghz3, input_state="1")


def test_arrays_are_read_only(ghz3):
    lat = layout(ghz3)
    with pytest.raises(ValueError):
        lat.roles[0, 0] = 0


def test_json_round_trip(ghz3):
    lat = layout(ghz3)
    doc = json.loads(json.dumps(lattice_to_dict(lat)))
    again = lattice_from_dict(doc)
    assert again == lat
    assert again.readout_col == 16


def test_json_rejects_partial_document(ghz3):
    doc = lattice_to_dict(layout(ghz3))
    doc["cells"].pop()
    with pytest.raises(ValueError):
        lattice_from_dict(doc)


@st.composite
def circuits(draw):
    n = draw(st.integers(1, 5))
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    kinds = ("h", "s", "sdg", "t", "tdg", "rz", "rx", "ry", "urot", "cnot")
    return Circuit(n, tuple(random_gate(rng, n, kinds) for _ in range(draw(st.integers(1, 15)))), f"h{seed}")


@settings(max_examples=150, deadline=None)
@given(circuits())
def test_layout_invariants(circuit):
    lat = layout(circuit)
    rows, cols = expected_shape(circuit)
    assert (lat.rows, lat.cols) == (rows, cols)
    n_cnot = sum(g.kind is GateKind.CNOT for g in circuit.gates)
    # wire rows are fully occupied; spacer rows hold only CNOT middles
    assert lat.occupied[0::2].all()
    assert int(lat.occupied[1::2].sum()) == n_cnot
    row = metrics_row(circuit, lat)
    assert row.lattice == row.graph_state + row.excised
    assert row.pauli + row.zrot4 + row.t4 == row.graph_state
    assert row.check() == []
    # deterministic
    assert layout(circuit) == lat
