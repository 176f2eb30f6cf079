import json

import pytest

from circuit_etch.cli import main
from circuit_etch.iqp import default_specs, dump_manifest
from circuit_etch.layout import lattice_from_dict, layout

GHZ = {
    "id": "ghz3",
    "qubits": 3,
    "gates": [{"type": "h", "target": 0}, {"type": "cnot", "control": 0, "target": 1}, {"type": "cnot", "control": 1, "target": 2}],
}


@pytest.fixture
def ghz_file(tmp_path):
    path = tmp_path / "ghz.json"
    path.write_text(json.dumps(GHZ))
    return path


def test_transpile_writes_outputs(ghz_file, tmp_path, capsys, ghz3):
    out = tmp_path / "out"
    assert main(["transpile", "--in", str(ghz_file), "--out-dir", str(out)]) == 0
    lat = lattice_from_dict(json.loads((out / "ghz3.lattice.json").read_text()))
    assert lat == layout(ghz3)
    assert len((out / "ghz3.edges.txt").read_text().splitlines()) == 52
    assert (out / "ghz3.metrics.csv").read_text().splitlines()[1] == 'ghz3,"[5, 17]",85,1,2,0,0,32,53,53,—'
    assert capsys.readouterr().out.startswith("ghz3,[5, 17],85")
    assert not [p for p in out.iterdir() if p.name.endswith(".tmp")]


def test_transpile_empty_warns(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text('{"qubits": 2, "gates": []}')
    assert main(["transpile", "--in", str(path), "--out-dir", str(tmp_path)]) == 0
    assert "warning" in capsys.readouterr().err
    assert (tmp_path / "empty.lattice.json").exists()


@pytest.mark.parametrize(
    "doc",
    ['{"qubits": 2, "gates": [{"type": "cnot", "control": 0, "target": 0}]}', "{", '{"qubits": 1, "gates": [{"type": "ccz", "target": 0}]}'],
)
def test_invalid_input_exits_1(tmp_path, capsys, doc):
    path = tmp_path / "bad.json"
    path.write_text(doc)
    assert main(["transpile", "--in", str(path), "--out-dir", str(tmp_path / "o")]) == 1
    assert capsys.readouterr().err.startswith("error:")
    assert not (tmp_path / "o").exists()


def test_missing_file_exits_2(tmp_path):
    assert main(["transpile", "--in", str(tmp_path / "nope.json"), "--out-dir", str(tmp_path)]) == 2
    assert main(["bench", "--manifest", str(tmp_path / "nope.json")]) == 2


def test_unwritable_output_exits_2(ghz_file, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["transpile", "--in", str(ghz_file), "--out-dir", str(blocker / "sub")]) == 2


def test_bench_is_deterministic(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(dump_manifest(default_specs(3, 1, n_max=20)))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["bench", "--manifest", str(manifest), "--out", str(a)]) == 0
    assert main(["bench", "--manifest", str(manifest), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 4
    assert "mean Pauli:non-Pauli" in capsys.readouterr().out


def test_bench_single_row_reports_insufficient_data(capsys):
    assert main(["bench", "--seeds", "1", "--n-max", "10"]) == 0
    assert "InsufficientData" in capsys.readouterr().out


def test_bench_all_rows_failing_exits_1(capsys):
    assert main(["bench", "--seeds", "2", "--depth-factor", "-1"]) == 1
    assert capsys.readouterr().out.count(",ERROR,") == 2


def test_verify(ghz_file, tmp_path, capsys):
    single = tmp_path / "t.json"
    single.write_text('{"id": "t", "qubits": 1, "gates": [{"type": "t", "target": 0}]}')
    assert main(["verify", "--in", str(single), str(ghz_file), "--samples", "10", "--json"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert [r["passed"] for r in reports] == [True, True]
    assert reports[0]["exhaustive"] and not reports[1]["exhaustive"]


def test_verify_with_corrupted_catalogue_exits_1(tmp_path, capsys):
    from circuit_etch.patterns import default_catalogue

    cat = tmp_path / "bad.tsv"
    cat.write_text(default_catalogue().replace("s", ["X", "X", "Y", "X"]).dumps())
    single = tmp_path / "s.json"
    single.write_text('{"id": "s", "qubits": 1, "gates": [{"type": "s", "target": 0}]}')
    assert main(["verify", "--in", str(single), "--catalogue", str(cat)]) == 1
    assert capsys.readouterr().out.startswith("FAIL s")


def test_distill(capsys):
    assert main(["distill", "--p", "1e-3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "15-to-1,15,,0.001,3.500000e-08"
    assert lines[2].startswith("concatenated-176,176,11x21,")


def test_whatif(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(
        '{"id": "c", "qubits": 2, "gates": [{"type": "cnot", "control": 0, "target": 1}, {"type": "t", "target": 0}]}'
    )
    assert main(["whatif", "--in", str(path)]) == 0
    out = capsys.readouterr().out
    assert "CZ for CNOT: Pauli" in out and "halved Pauli" in out


def test_render(ghz_file, tmp_path, capsys):
    out = tmp_path / "o"
    main(["transpile", "--in", str(ghz_file), "--out-dir", str(out)])
    svg = tmp_path / "g.svg"
    assert main(["render", "--in", str(out / "ghz3.lattice.json"), "--out", str(svg)]) == 0
    assert svg.read_text().count("<circle") == 85
    capsys.readouterr()
    assert main(["render", "--in", str(out / "ghz3.lattice.json"), "--format", "dot", "--no-show-excised"]) == 0
    assert capsys.readouterr().out.count("pos=") == 53
    assert main(["render", "--in", str(out / "ghz3.lattice.json"), "--format", "png"]) == 1


def test_transpile_is_idempotent(ghz_file, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["transpile", "--in", str(ghz_file), "--out-dir", str(a)])
    main(["transpile", "--in", str(ghz_file), "--out-dir", str(b)])
    for name in ("ghz3.lattice.json", "ghz3.edges.txt", "ghz3.metrics.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_non_adjacent_cnot_message(tmp_path, capsys):
    path = tmp_path / "far.json"
    path.write_text('{"qubits": 3, "gates": [{"type": "cnot", "control": 0, "target": 2}]}')
    assert main(["transpile", "--in", str(path), "--out-dir", str(tmp_path)]) == 1
    assert "NonAdjacentCNOT" in capsys.readouterr().err
