"""Command-line entry point: ``circuit-etch <subcommand>``.

Exit codes: 0 success, 1 invalid input (validation or failed check), 2 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from pathlib import Path

from . import __version__
from .circuit import CircuitFormatError, parse_circuit, validate
from .graph_state import build_graph_state, to_edge_list
from .iqp import InsufficientData, InvalidSpec, IqpSpec, default_specs, load_manifest, run_batch, summarize
from .layout import EmptyCircuitWarning, lattice_from_dict, lattice_to_dict, layout
from .metrics import (
    DEFAULT_TOLERANCE,
    UNDEFINED,
    MetricsRow,
    Protocol,
    TFactoryModel,
    UndefinedRatio,
    format_ratio,
    meets_target,
    metrics_row,
    row_cells,
    whatif_halve_pauli,
    whatif_substitute_cz,
    write_csv,
)
from .oracle import OracleError, equivalent
from .patterns import load_catalogue
from .render import RenderSpec, UnknownFormat, render

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc


def _load_circuit(path):
    try:
        circuit = parse_circuit(_read(path))
    except CircuitFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc
    problems = validate(circuit)
    if problems:
        raise CliError("\n".join(f"{path}: {p}" for p in problems), EXIT_INVALID)
    if not circuit.id:
        circuit = type(circuit)(circuit.n_wires, circuit.gates, Path(path).stem)
    return circuit


def _catalogue(args):
    if getattr(args, "catalogue", None) is None:
        return None
    try:
        return load_catalogue(args.catalogue)
    except OSError as exc:
        raise CliError(f"cannot read catalogue {args.catalogue}: {exc}", EXIT_IO) from exc
    except ValueError as exc:
        raise CliError(f"bad catalogue {args.catalogue}: {exc}", EXIT_INVALID) from exc


def cmd_transpile(args) -> int:
    circuit = _load_circuit(args.input)
    cat = _catalogue(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptyCircuitWarning)
        lat = layout(circuit, cat, input_state=args.input_state)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    row = metrics_row(circuit, lat)
    graph = build_graph_state(lat)
    out = Path(args.out_dir)
    stem = circuit.id
    try:
        atomic_write(out / f"{stem}.lattice.json", json.dumps(lattice_to_dict(lat), indent=1) + "\n")
        atomic_write(out / f"{stem}.edges.txt", to_edge_list(graph))
        atomic_write(out / f"{stem}.metrics.csv", write_csv([row]))
    except OSError as exc:
        raise CliError(f"cannot write to {out}: {exc}", EXIT_IO) from exc
    print(",".join(row_cells(row)))
    return EXIT_OK


def _bench_specs(args) -> list[IqpSpec]:
    if args.manifest is not None:
        try:
            return load_manifest(_read(args.manifest))
        except (json.JSONDecodeError, InvalidSpec, TypeError) as exc:
            raise CliError(f"bad manifest {args.manifest}: {exc}", EXIT_INVALID) from exc
    overrides = {"n_min": args.n_min, "n_max": args.n_max}
    if args.depth_factor is not None:
        overrides["depth_factor"] = args.depth_factor
    return default_specs(args.seeds, args.seed, **overrides)


def cmd_bench(args) -> int:
    specs = _bench_specs(args)
    rows = run_batch(specs, _catalogue(args))
    csv_text = write_csv(rows)
    summary = ["# summary"]
    try:
        stats = summarize(rows)
        summary += [f"# {line}" for line in stats.lines()]
        defined = [r for r in rows if isinstance(r, MetricsRow) and r.ratio is not UNDEFINED]
        hits = sum(meets_target(r.ratio, args.tolerance) for r in defined)
        summary.append(f"# rows within {args.tolerance}:1: {hits} of {len(defined)}")
    except InsufficientData as exc:
        stats = None
        summary.append(f"# InsufficientData: {exc}")
    failed = [r for r in rows if not isinstance(r, MetricsRow)]
    for r in failed:
        summary.append(f"# error in row {r.index} ({r.circuit_id}): {r.message}")
    if args.out:
        try:
            atomic_write(args.out, csv_text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    else:
        sys.stdout.write(csv_text)
    print("\n".join(summary))
    if args.summary_json:
        atomic_write(args.summary_json, json.dumps(stats.to_dict() if stats else None, indent=2) + "\n")
    return EXIT_INVALID if rows and len(failed) == len(rows) else EXIT_OK


def cmd_verify(args) -> int:
    reports = []
    for path in args.input:
        circuit = _load_circuit(path)
        try:
            rep = equivalent(circuit, catalogue=_catalogue(args), samples=args.samples, seed=args.seed, report=True)
        except OracleError as exc:
            raise CliError(f"{path}: {exc}", EXIT_INVALID) from exc
        reports.append(rep)
        if not args.json:
            print(rep)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_INVALID


def cmd_distill(args) -> int:
    print("protocol,tiles,block,p,output error")
    for proto in Protocol:
        model = TFactoryModel(proto)
        block = "x".join(map(str, model.block_dims)) if model.block_dims else ""
        for p in args.p:
            print(f"{proto.value},{model.tiles},{block},{p:g},{model.error(p):.6e}")
    return EXIT_OK


def cmd_whatif(args) -> int:
    circuit = _load_circuit(args.input)
    row = metrics_row(circuit, layout(circuit, _catalogue(args)))
    cz = whatif_substitute_cz(row)
    print(f"circuit: {row.circuit_id}")
    print(f"as etched: Pauli {row.pauli}, ratio {format_ratio(row.ratio)}")
    print(f"CZ for CNOT: Pauli {cz.pauli}, ratio {format_ratio(cz.ratio)}")
    try:
        halved = whatif_halve_pauli(row)
        verdict = "meets" if meets_target(halved, args.tolerance) else "misses"
        print(f"halved Pauli: ratio {format_ratio(halved)} ({verdict} {args.tolerance}:1)")
    except UndefinedRatio as exc:
        print(f"halved Pauli: {exc}")
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        spec = RenderSpec(args.format, args.show_excised)
    except UnknownFormat as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    try:
        lat = lattice_from_dict(json.loads(_read(args.input)))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"bad lattice file {args.input}: {exc}", EXIT_INVALID) from exc
    doc = render(lat, spec)
    if args.out:
        try:
            atomic_write(args.out, doc)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circuit-etch", description="Etch gate-list circuits into 2-D graph states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def catalogue_flag(p):
        p.add_argument("--catalogue", help="pattern catalogue file (default: bundled)")

    p = sub.add_parser("transpile", help="lay out one circuit and write lattice, edge list and metrics")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--input-state", choices=("0", "+", "psi"), default="0")
    catalogue_flag(p)
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("bench", help="transpile a batch of seeded IQP circuits")
    p.add_argument("--manifest", help="JSON list of {seed, n_min, n_max, depth_factor, gate_mix}")
    p.add_argument("--seed", type=int, default=1, help="first seed when no manifest is given")
    p.add_argument("--seeds", type=int, default=30, help="number of seeds when no manifest is given")
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=120)
    p.add_argument("--depth-factor", type=float)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--summary-json")
    catalogue_flag(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check circuits against the MBQC oracle")
    p.add_argument("--in", dest="input", nargs="+", required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    catalogue_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distill", help="T-factory footprints and output error rates")
    p.add_argument("--p", type=float, nargs="+", default=[1e-4, 1e-3, 1e-2])
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("whatif", help="CZ-substitution and Pauli-halving estimates for a circuit")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    catalogue_flag(p)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("render", help="draw a lattice file as DOT or SVG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", default="svg")
    p.add_argument("--show-excised", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
