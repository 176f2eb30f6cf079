"""Seeded IQP-style benchmark circuits, batch runs and summary statistics.

Randomness comes from the raw 64-bit output of PCG64 (numpy's
``PCG64`` bit generator seeded through ``SeedSequence``). Only the raw
stream is used, and integer and float draws are derived from it here, so a
seed gives the same circuit on every platform and numpy version.
"""

from __future__ import annotations

import json
import math
import statistics
from bisect import bisect_right
from dataclasses import asdict, dataclass, field
from itertools import accumulate

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .layout import layout
from .metrics import UNDEFINED, MetricsRow, metrics_row
from .patterns import PatternCatalogue

DEFAULT_N_MIN = 5
DEFAULT_N_MAX = 120
# Calibrated: the default 30-seed batch averages 52,027 graph-state qubits.
DEFAULT_DEPTH_FACTOR = 2.5
DEFAULT_GATE_MIX = {
    "h": 0.0,
    "s": 0.36,
    "sdg": 0.36,
    "rz": 0.006,
    "t": 0.007,
    "tdg": 0.007,
    "cnot": 0.26,
}
MIX_KINDS = ("h", "s", "sdg", "rz", "t", "tdg", "cnot")
REQUIRED_CLASSES = {
    "non-Clifford": ("rz", "t", "tdg"),
    "entangling": ("cnot",),
}
MAX_WIRES = 10_000
DISTILLATION_TARGET = 11


class InvalidSpec(ValueError):
    pass


class InsufficientData(ValueError):
    pass


class SeededStream:
    """Uniform draws built on PCG64's raw 64-bit words."""

    _CHUNK = 4096

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned value, got {seed!r}")
        self._bits = np.random.PCG64(int(seed))
        self._buf: list[int] = []

    def u64(self) -> int:
        if not self._buf:
            self._buf = self._bits.random_raw(self._CHUNK).tolist()[::-1]
        return self._buf.pop()

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        limit = (2**64 // n) * n
        while True:
            u = self.u64()
            if u < limit:
                return u % n

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class IqpSpec:
    seed: int
    n_min: int = DEFAULT_N_MIN
    n_max: int = DEFAULT_N_MAX
    depth_factor: float = DEFAULT_DEPTH_FACTOR
    gate_mix: dict = field(default_factory=lambda: dict(DEFAULT_GATE_MIX), hash=False)

    @property
    def n_range(self) -> tuple[int, int]:
        return (self.n_min, self.n_max)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "IqpSpec":
        known = {"seed", "n_min", "n_max", "depth_factor", "gate_mix"}
        extra = set(doc) - known
        if extra:
            raise InvalidSpec(f"unknown manifest keys {sorted(extra)}")
        if "seed" not in doc:
            raise InvalidSpec("manifest entry needs a seed")
        kwargs = {k: doc[k] for k in known if k in doc}
        if "gate_mix" in kwargs:
            kwargs["gate_mix"] = dict(kwargs["gate_mix"])
        return cls(**kwargs)


def validate_spec(spec: IqpSpec) -> list[str]:
    problems = []
    if not 1 <= spec.n_min <= spec.n_max <= MAX_WIRES:
        problems.append(f"n range [{spec.n_min}, {spec.n_max}] must satisfy 1 <= n_min <= n_max <= {MAX_WIRES}")
    if not (isinstance(spec.depth_factor, (int, float)) and spec.depth_factor > 0 and math.isfinite(spec.depth_factor)):
        problems.append(f"depth_factor must be positive, got {spec.depth_factor!r}")
    unknown = set(spec.gate_mix) - set(MIX_KINDS)
    if unknown:
        problems.append(f"unknown gate kinds in gate_mix: {sorted(unknown)}")
    if any(not isinstance(w, (int, float)) or w < 0 or not math.isfinite(w) for w in spec.gate_mix.values()):
        problems.append("gate_mix weights must be finite and nonnegative")
    for name, kinds in REQUIRED_CLASSES.items():
        if not any(spec.gate_mix.get(k, 0) > 0 for k in kinds):
            problems.append(f"gate_mix has no positive weight for the {name} class {kinds}")
    if spec.gate_mix.get("cnot", 0) > 0 and spec.n_min < 2:
        problems.append("CNOTs need at least two wires; raise n_min")
    return problems


def _single(kind: str, wire: int, rng: SeededStream) -> Gate:
    k = GateKind(kind)
    if k is GateKind.RZ:
        return Gate(k, wire, None, (rng.uniform() * 2 * math.pi,))
    return Gate(k, wire)


def generate_iqp(spec: IqpSpec) -> Circuit:
    """IQP-shaped circuit: H on every wire, random layers, H on every wire.

    Each layer sweeps the wires top to bottom drawing a gate from
    ``gate_mix``; a CNOT takes the current wire and the one below (in a random
    orientation). Kinds with positive weight that the draw missed are appended
    before the closing H column.
    """
    problems = validate_spec(spec)
    if problems:
        raise InvalidSpec("; ".join(problems))
    rng = SeededStream(spec.seed)
    n = spec.n_min + rng.below(spec.n_max - spec.n_min + 1)

    kinds = [k for k in MIX_KINDS if spec.gate_mix.get(k, 0) > 0]
    cum = list(accumulate(spec.gate_mix[k] for k in kinds))
    singles = [k for k in kinds if k != "cnot"]
    single_cum = list(accumulate(spec.gate_mix[k] for k in singles))

    def draw(names, weights):
        return names[min(bisect_right(weights, rng.uniform() * weights[-1]), len(names) - 1)]

    gates = [Gate(GateKind.H, w) for w in range(n)]
    layers = max(1, round(spec.depth_factor * n))
    for _ in range(layers):
        w = 0
        while w < n:
            kind = draw(kinds, cum)
            if kind == "cnot":
                if w + 1 < n:
                    c, t = (w, w + 1) if rng.below(2) == 0 else (w + 1, w)
                    gates.append(Gate(GateKind.CNOT, t, c))
                    w += 2
                    continue
                if not singles:
                    break
                kind = draw(singles, single_cum)
            gates.append(_single(kind, w, rng))
            w += 1

    present = {g.kind.value for g in gates[n:]}
    for kind in kinds:
        if kind not in present:
            gates.append(Gate(GateKind.CNOT, 1, 0) if kind == "cnot" else _single(kind, 0, rng))
    gates.extend(Gate(GateKind.H, w) for w in range(n))
    return Circuit(n, tuple(gates), f"iqp-{spec.seed}")


@dataclass(frozen=True)
class BatchError:
    index: int
    circuit_id: str
    message: str

    def __str__(self) -> str:
        return self.message


def run_batch(specs, catalogue: PatternCatalogue | None = None) -> list:
    """One metrics row per spec, in input order; failures become :class:`BatchError`."""
    out = []
    for i, spec in enumerate(specs):
        cid = f"iqp-{getattr(spec, 'seed', i)}"
        try:
            circuit = generate_iqp(spec)
            out.append(metrics_row(circuit, layout(circuit, catalogue)))
        except Exception as exc:  # a bad row must not sink the batch
            out.append(BatchError(i, cid, f"{type(exc).__name__}: {exc}"))
    return out


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean_graph_state: float
    mean_pauli: float
    mean_ratio: float
    sd_ratio: float
    target_probability: float

    def to_dict(self) -> dict:
        return asdict(self)

    def lines(self) -> list[str]:
        return [
            f"count: {self.count}",
            f"mean graph state: {self.mean_graph_state:.1f}",
            f"mean Pauli: {self.mean_pauli:.1f}",
            f"mean Pauli:non-Pauli: {self.mean_ratio:.1f}",
            f"sd Pauli:non-Pauli: {self.sd_ratio:.1f}",
            f"density at {DISTILLATION_TARGET}:1: {self.target_probability:.3E}",
        ]


def probability_of_ratio(x: float, mean: float, sd: float) -> float:
    """Normal probability density of the ratio at ``x`` (a density, not a tail probability)."""
    if not sd > 0:
        raise ValueError(f"standard deviation must be positive, got {sd!r}")
    return statistics.NormalDist(mean, sd).pdf(x)


def summarize(rows) -> SummaryStats:
    """Means over rows with a defined ratio; sample standard deviation of the ratio."""
    good = [r for r in rows if isinstance(r, MetricsRow) and r.ratio is not UNDEFINED]
    if len(good) < 2:
        raise InsufficientData(f"need at least 2 rows with a defined ratio, got {len(good)}")
    ratios = [float(r.ratio) for r in good]
    mean, sd = statistics.fmean(ratios), statistics.stdev(ratios)
    density = probability_of_ratio(DISTILLATION_TARGET, mean, sd) if sd > 0 else float("nan")
    return SummaryStats(
        count=len(good),
        mean_graph_state=statistics.fmean(r.graph_state for r in good),
        mean_pauli=statistics.fmean(r.pauli for r in good),
        mean_ratio=mean,
        sd_ratio=sd,
        target_probability=density,
    )


def default_specs(count: int = 30, first_seed: int = 1, **overrides) -> list[IqpSpec]:
    return [IqpSpec(seed=first_seed + i, **overrides) for i in range(count)]


def load_manifest(text: str) -> list[IqpSpec]:
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise InvalidSpec("manifest must be a JSON list")
    return [IqpSpec.from_dict(entry) for entry in doc]


def dump_manifest(specs) -> str:
    return json.dumps([s.to_dict() for s in specs], indent=2)
