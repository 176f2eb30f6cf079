from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circuit_etch.iqp import BatchError
from circuit_etch.layout import layout
from circuit_etch.metrics import (
    CSV_HEADER,
    UNDEFINED,
    InvalidLevel,
    Protocol,
    TFactoryModel,
    UndefinedRatio,
    format_ratio,
    make_row,
    meets_target,
    metrics_row,
    read_csv,
    tfactory_error,
    tfactory_footprint,
    whatif_halve_pauli,
    whatif_substitute_cz,
    write_csv,
)

from conftest import circ


def test_ghz3_row(ghz3):
    row = metrics_row(ghz3, layout(ghz3))
    assert (row.specification, row.lattice, row.clifford4, row.cnot, row.zrot4, row.t4) == ((5, 17), 85, 1, 2, 0, 0)
    assert (row.excised, row.graph_state, row.pauli) == (32, 53, 53)
    assert row.ratio is UNDEFINED
    assert format_ratio(row.ratio) == "—"


def test_mixed_row():
    c = circ(1, {"type": "t", "target": 0}, {"type": "h", "target": 0}, {"type": "urot", "target": 0, "angles": [0.1, 0.2, 0.3]})
    row = metrics_row(c)
    # 1 + 4 + 4 + 12 cells; three non-Pauli qubits from urot, one from t
    assert row.specification == (1, 21)
    assert (row.clifford4, row.zrot4, row.t4) == (1, 3, 1)
    assert row.pauli == 17 and row.ratio == Fraction(17, 4)
    assert format_ratio(row.ratio) == "4.2 : 1"


@pytest.mark.parametrize(
    "ratio, text",
    [(Fraction(1814, 5), "362.8 : 1"), (Fraction(8), "8 : 1"), (Fraction(1, 3), "0.3 : 1"), (UNDEFINED, "—")],
)
def test_format_ratio(ratio, text):
    assert format_ratio(ratio) == text


def test_meets_target():
    assert meets_target(Fraction(25))
    assert not meets_target(Fraction(251, 10))
    assert meets_target(Fraction(30), tolerance=40)
    with pytest.raises(UndefinedRatio):
        meets_target(UNDEFINED)


@pytest.mark.parametrize("p", [1e-4, 1e-3, 1e-2])
def test_tfactory_errors(p):
    assert tfactory_error(p, 1) == pytest.approx(35 * p**3, rel=1e-15)
    assert tfactory_error(p, 2) == pytest.approx(35 * (35 * p**3) ** 3, rel=1e-15)


def test_tfactory_model():
    assert [tfactory_footprint(TFactoryModel(p)) for p in Protocol] == [15, 176, 225]
    assert TFactoryModel(Protocol.CONCATENATED_176).block_dims == (11, 21)
    assert TFactoryModel(Protocol.CONCATENATED_225).block_dims == (15, 15)
    assert TFactoryModel(Protocol.FIFTEEN_TO_ONE).error(1e-3) == tfactory_error(1e-3, 1)
    with pytest.raises(InvalidLevel):
        tfactory_error(1e-3, 3)
    with pytest.raises(ValueError):
        tfactory_error(1.5, 1)


rows = st.builds(
    lambda r, c, cl, cn, z, t, ex: make_row("r", (r, c), cl, cn, z, t, ex),
    st.integers(1, 300),
    st.integers(2, 3000),
    st.integers(0, 500),
    st.integers(0, 500),
    st.integers(0, 100),
    st.integers(0, 100),
    st.integers(0, 1000),
)


@given(rows)
def test_row_identities(row):
    assert row.check() == []
    assert row.lattice == row.graph_state + row.excised
    assert row.pauli + row.zrot4 + row.t4 == row.graph_state


@given(rows)
def test_whatif_algebra(row):
    cz = whatif_substitute_cz(row)
    assert row.pauli - cz.pauli == 5 * row.cnot
    assert row.graph_state - cz.graph_state == 5 * row.cnot
    if row.non_pauli:
        assert cz.ratio <= row.ratio
        assert whatif_halve_pauli(row) == Fraction(row.pauli // 2, row.zrot4 + row.t4)
    else:
        assert cz.ratio is UNDEFINED
        with pytest.raises(UndefinedRatio):
            whatif_halve_pauli(row)


def test_csv_round_trip(ghz3):
    good = [metrics_row(ghz3), metrics_row(circ(1, {"type": "rz", "target": 0, "angle": 0.3}))]
    text = write_csv(good + [BatchError(2, "iqp-9", "InvalidSpec: nope")])
    lines = text.splitlines()
    assert lines[0].split(",")[:3] == list(CSV_HEADER[:3])
    assert lines[1] == 'ghz3,"[5, 17]",85,1,2,0,0,32,53,53,—'
    assert lines[3].startswith("iqp-9,ERROR,")
    assert read_csv(text) == good
