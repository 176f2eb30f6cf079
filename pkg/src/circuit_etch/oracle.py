"""Dense-statevector oracles for checking transpiled lattices at desk scale.

Amplitude index convention: qubit 0 is the most significant bit.

The MBQC simulator measures lattice qubits column by column (top to bottom
within a column). Qubits are entangled lazily: a qubit joins the state only
once a neighbour is about to be measured, so the live register stays a few
rows wide even when the lattice has two dozen qubits.

Byproducts are tracked in a Pauli frame. For each measured qubit ``j`` the
simulator needs a product of graph-state generators that (a) anticommutes
with the measurement at ``j`` and (b) acts on every qubit measured earlier
as the identity or as that qubit's own (Pauli) observable. Applying that
product maps the outcome-0 branch onto the outcome-1 branch, so flipping its
Pauli content into the frame keeps the run on the ideal branch. The sets are
found by solving a small linear system over GF(2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .graph_state import GraphState, PauliString, build_graph_state, generators_commute, stabilizer_generators, symplectic_rank
from .layout import Lattice, Role, layout
from .patterns import MeasurementLabel, PatternCatalogue

MAX_CIRCUIT_WIRES = 12
MAX_DENSE_QUBITS = 24
# Only a few columns are live at once, so the lattice itself may be larger.
MAX_ORACLE_VERTICES = 2000
EXHAUSTIVE_LIMIT = 16
SAMPLED_HISTORIES = 200
FIDELITY_TOL = 1e-9
NORM_TOL = 1e-12


class OracleError(RuntimeError):
    pass


class TooLarge(OracleError):
    pass


class NoFlowError(OracleError):
    """No byproduct correction exists for some measurement in the chosen order."""


class NonDeterministicResult(OracleError):
    pass


# -- state vectors -----------------------------------------------------------

@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n > MAX_DENSE_QUBITS:
            raise TooLarge(f"{self.n} qubits exceeds the dense bound of {MAX_DENSE_QUBITS}")
        if self.amplitudes.size != 2**self.n:
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {self.amplitudes.size}")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm {norm!r})")

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n) if self.n else self.amplitudes.reshape(())

    @classmethod
    def from_tensor(cls, psi: np.ndarray) -> "StateVector":
        flat = psi.reshape(-1)
        return cls(psi.ndim, flat / np.linalg.norm(flat))


_SINGLE = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
    "+i": np.array([1, 1j], dtype=complex) / math.sqrt(2),
    "-i": np.array([1, -1j], dtype=complex) / math.sqrt(2),
}


def random_product_state(n: int, seed: int = 0) -> StateVector:
    rng = np.random.default_rng(seed)
    psi = np.array([1.0 + 0j])
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = np.kron(psi, v / np.linalg.norm(v))
    return StateVector(n, psi)


def prepare_input(spec, n: int) -> StateVector:
    """Input register from a label ("0", "+", "-i", ...), one label per wire, or a state."""
    if isinstance(spec, StateVector):
        if spec.n != n:
            raise ValueError(f"input state has {spec.n} qubits, circuit has {n}")
        return spec
    labels = [spec] * n if isinstance(spec, str) else list(spec)
    if len(labels) != n:
        raise ValueError(f"need {n} input labels, got {len(labels)}")
    psi = np.array([1.0 + 0j])
    for lab in labels:
        if lab not in _SINGLE:
            raise ValueError(f"unknown input label {lab!r}")
        psi = np.kron(psi, _SINGLE[lab])
    return StateVector(n, psi)


# -- circuit simulation ------------------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def gate_matrix(gate: Gate) -> np.ndarray:
    """2x2 unitary of a single-qubit gate."""
    k, a = gate.kind, gate.radians
    if k is GateKind.H:
        return _H
    if k is GateKind.S:
        return np.diag([1, 1j])
    if k is GateKind.SDG:
        return np.diag([1, -1j])
    if k is GateKind.T:
        return np.diag([1, cmath.exp(0.25j * math.pi)])
    if k is GateKind.TDG:
        return np.diag([1, cmath.exp(-0.25j * math.pi)])
    if k is GateKind.RX:
        return rx(a[0])
    if k is GateKind.RY:
        return ry(a[0])
    if k is GateKind.RZ:
        return rz(a[0])
    if k is GateKind.UROT:
        return rz(a[2]) @ rx(a[1]) @ rz(a[0])
    raise ValueError(f"{k.value} is not a single-qubit gate")


def _apply_1q(psi: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(u, psi, axes=([1], [q])), 0, q)


def _apply_cnot(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    psi = psi.copy()
    idx = [slice(None)] * psi.ndim
    idx[control] = 1
    sub = psi[tuple(idx)]
    t = target if target < control else target - 1
    psi[tuple(idx)] = np.flip(sub, axis=t)
    return psi


def simulate_circuit(circuit: Circuit, input="0") -> StateVector:
    n = circuit.n_wires
    if n > MAX_CIRCUIT_WIRES:
        raise TooLarge(f"{n} wires exceeds the circuit simulator bound of {MAX_CIRCUIT_WIRES}")
    psi = prepare_input(input, n).tensor()
    for g in circuit.gates:
        if g.kind is GateKind.CNOT:
            psi = _apply_cnot(psi, g.control, g.target)
        else:
            psi = _apply_1q(psi, gate_matrix(g), g.target)
    return StateVector(n, psi.reshape(-1))


# -- graph states ------------------------------------------------------------

def _axis_sign(n: int, axis: int) -> np.ndarray:
    """+1/-1 along ``axis`` (the Z eigenvalues), broadcastable over an n-qubit tensor."""
    shape = [1] * n
    shape[axis] = 2
    return np.array([1.0, -1.0]).reshape(shape)


def graph_state_vector(graph: GraphState) -> StateVector:
    """All qubits in |+>, then CZ on every edge."""
    n = graph.n
    if n > MAX_DENSE_QUBITS:
        raise TooLarge(f"{n} vertices exceeds the dense bound of {MAX_DENSE_QUBITS}")
    psi = np.full((2,) * n, 1 / math.sqrt(2**n))
    for u, v in graph.edges:
        idx = [slice(None)] * n
        idx[u] = idx[v] = 1
        psi[tuple(idx)] *= -1
    return StateVector(n, psi.reshape(-1).astype(complex))


def _pauli_tensor(psi: np.ndarray, pauli: PauliString) -> np.ndarray:
    n = psi.ndim
    out = psi
    for i in pauli.z:
        out = out * _axis_sign(n, i)
    if pauli.x:
        out = np.flip(out, axis=tuple(pauli.x))
    factor = pauli.phase * (1j ** len(pauli.x & pauli.z))
    return out if factor == 1 else out * factor


def apply_pauli(state: StateVector, pauli: PauliString) -> np.ndarray:
    """Amplitudes of ``pauli`` applied to ``state`` (Z part first, then X)."""
    return _pauli_tensor(state.tensor(), pauli).reshape(-1)


def verify_stabilizers(graph: GraphState, generators: Sequence[PauliString] | None = None, dense: bool | None = None) -> bool:
    """Check the graph state's stabilizer generators.

    The symplectic path checks pairwise commutation and full rank. The dense
    path (default when the graph has at most 24 vertices) also checks that
    every generator fixes the state vector.
    """
    gens = list(stabilizer_generators(graph) if generators is None else generators)
    n = graph.n
    if any(g.n != n for g in gens):
        return False
    if not generators_commute(gens) or symplectic_rank(gens) != n or len(gens) != n:
        return False
    if dense is None:
        dense = n <= MAX_DENSE_QUBITS
    if not dense or n == 0:
        return True
    psi = graph_state_vector(graph).tensor()
    if not np.any(psi.imag):
        psi = psi.real  # halves the memory traffic; Y or imaginary phases promote back to complex
    return all(np.max(np.abs(_pauli_tensor(psi, g) - psi)) <= 1e-10 for g in gens)


def full_grid_graph(lattice: Lattice) -> GraphState:
    """Nearest-neighbour cluster on every lattice cell, before excision."""
    from .graph_state import Vertex

    rows, cols = lattice.rows, lattice.cols
    verts = [
        Vertex(r * cols + c, r, c, lattice.label_at(r, c), Role(int(lattice.roles[r, c])))
        for r in range(rows)
        for c in range(cols)
    ]
    edges = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    edges += [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    return GraphState(verts, edges)


def excise_by_measurement(lattice: Lattice, outcomes: Sequence[int] | None = None) -> float:
    """Z-measure the excised cells of the full cluster and compare with vertex deletion.

    Returns the fidelity between the post-measurement state (after undoing the
    Z byproducts on neighbours) and the graph state of the occupied cells.
    """
    grid = full_grid_graph(lattice)
    psi = graph_state_vector(grid).tensor().copy()
    excised = [v.id for v in grid.vertices if v.role is Role.EXCISED]
    outcomes = list(outcomes) if outcomes is not None else [0] * len(excised)
    live = list(range(grid.n))
    flips: set[int] = set()
    for v, s in zip(excised, outcomes):
        ax = live.index(v)
        psi = np.take(psi, s, axis=ax)
        live.pop(ax)
        if s:
            flips.symmetric_difference_update(grid.neighbours(v))
    for v in flips & set(live):
        psi = _apply_1q(psi, _Z, live.index(v))
    got = StateVector.from_tensor(psi)
    want = graph_state_vector(build_graph_state(lattice))
    return got.fidelity(want)


# -- MBQC simulation ---------------------------------------------------------

def measurement_order(graph: GraphState) -> list[int]:
    """Every non-readout vertex, column by column, top to bottom."""
    measured = [v for v in graph.vertices if v.role is not Role.READOUT]
    return [v.id for v in sorted(measured, key=lambda v: (v.col, v.row))]


def _kind(label: MeasurementLabel) -> str:
    if not label.in_plane:
        raise OracleError(f"cannot simulate a {label.basis} measurement inside the graph state")
    return label.basis


def _solve_gf2(equations: list[tuple[int, int]], nvars: int) -> int | None:
    """Solve sum(mask & x) = rhs over GF(2); return one solution as a bitmask."""
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in equations:
        for bit in sorted(pivots, reverse=True):
            if mask >> bit & 1:
                pm, pr = pivots[bit]
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        top = mask.bit_length() - 1
        for bit, (pm, pr) in list(pivots.items()):
            if pm >> top & 1:
                pivots[bit] = (pm ^ mask, pr ^ rhs)
        pivots[top] = (mask, rhs)
    solution = 0
    for bit, (mask, rhs) in pivots.items():
        # free variables are zero, so each reduced row fixes its pivot
        if rhs:
            solution |= 1 << bit
    return solution


def find_corrections(graph: GraphState, order: Sequence[int]) -> dict[int, tuple[int, int]]:
    """Byproduct correction for every measured vertex as (X mask, Z mask) over vertex ids."""
    inputs = set(graph.inputs())
    var_of = {v.id: k for k, v in enumerate(u for u in graph.vertices if u.id not in inputs)}
    vertex_of = {k: v for v, k in var_of.items()}
    nbr_mask = [sum(1 << var_of[w] for w in graph.neighbours(v) if w in var_of) for v in range(graph.n)]

    def x_of(v):
        return (1 << var_of[v]) if v in var_of else 0

    kinds = {v: _kind(graph.vertices[v].label) for v in order}
    out = {}
    for pos, j in enumerate(order):
        eqs = []
        kj = kinds[j]
        if kj == "XY":
            eqs += [(x_of(j), 0), (nbr_mask[j], 1)]
        elif kj == "X":
            eqs.append((nbr_mask[j], 1))
        else:
            eqs.append((x_of(j) ^ nbr_mask[j], 1))
        for k in order[:pos]:
            kk = kinds[k]
            if kk == "XY":
                eqs += [(x_of(k), 0), (nbr_mask[k], 0)]
            elif kk == "X":
                eqs.append((nbr_mask[k], 0))
            else:
                eqs.append((x_of(k) ^ nbr_mask[k], 0))
        sol = _solve_gf2(eqs, len(var_of))
        if sol is None:
            raise NoFlowError(f"no byproduct correction for vertex {j} ({graph.vertices[j].row}, {graph.vertices[j].col})")
        xmask = zmask = 0
        for k in range(len(var_of)):
            if sol >> k & 1:
                v = vertex_of[k]
                xmask |= 1 << v
                for w in graph.neighbours(v):
                    zmask ^= 1 << w
        out[j] = (xmask, zmask)
    return out


@dataclass
class MbqcRun:
    """One measurement history and the corrected readout register."""

    order: list[int]
    outcomes: dict[int, int]
    frame: list[tuple[int, int]]
    state: StateVector


def _mask_bits(mask: int, n: int) -> np.ndarray:
    return np.array([mask >> i & 1 for i in range(n)], dtype=bool)


class _Program:
    """Everything about a lattice that does not depend on the outcomes."""

    def __init__(self, lattice: Lattice):
        graph = build_graph_state(lattice)
        if graph.n > MAX_ORACLE_VERTICES:
            raise TooLarge(f"lattice has {graph.n} qubits; the oracle stops at {MAX_ORACLE_VERTICES}")
        self.graph = graph
        self.order = measurement_order(graph)
        self.inputs = sorted(graph.inputs(), key=lambda v: graph.vertices[v].row)
        self.outputs = sorted(graph.outputs(), key=lambda v: graph.vertices[v].row)
        self.corrections = find_corrections(graph, self.order)
        self.correction_bits = {
            j: (_mask_bits(cx, graph.n), _mask_bits(cz, graph.n)) for j, (cx, cz) in self.corrections.items()
        }
        self.angles = {v: graph.vertices[v].label.angle for v in self.order}


class _Branch:
    __slots__ = ("psi", "live", "added", "fx", "fz")

    def __init__(self, psi, live, added, fx, fz):
        self.psi, self.live, self.added, self.fx, self.fz = psi, live, added, fx, fz

    def copy(self):
        return _Branch(self.psi, list(self.live), set(self.added), self.fx, self.fz)


_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


def _start(prog: _Program, input_state: StateVector) -> _Branch:
    return _Branch(input_state.tensor().astype(complex), list(prog.inputs), set(prog.inputs), 0, 0)


def _add(prog: _Program, br: _Branch, v: int):
    if v in br.added:
        return
    if len(br.live) >= MAX_DENSE_QUBITS:
        raise TooLarge(f"live register would exceed the dense bound of {MAX_DENSE_QUBITS} qubits")
    br.psi = np.multiply.outer(br.psi, _PLUS)
    br.live.append(v)
    br.added.add(v)
    ax_v = br.psi.ndim - 1
    for w in prog.graph.neighbours(v):
        if w not in br.added:
            continue
        if w not in br.live:
            raise OracleError(f"vertex {w} was measured before its neighbour {v} was entangled")
        idx = [slice(None)] * br.psi.ndim
        idx[br.live.index(w)] = 1
        idx[ax_v] = 1
        br.psi = br.psi.copy()
        br.psi[tuple(idx)] *= -1


def _measure(prog: _Program, br: _Branch, j: int, outcome: int | None, rng) -> tuple[int, float]:
    """Measure ``j`` in its frame-adapted basis. Returns (outcome, probability)."""
    _add(prog, br, j)
    for w in prog.graph.neighbours(j):
        _add(prog, br, w)
    sx, sz = br.fx >> j & 1, br.fz >> j & 1
    phi = (-prog.angles[j] if sx else prog.angles[j]) + (math.pi if sz else 0.0)
    ax = br.live.index(j)
    e = cmath.exp(-1j * phi)
    branches = []
    for s in (0, 1):
        bra = np.array([1, -e if s else e], dtype=complex) / math.sqrt(2)
        proj = np.tensordot(bra, br.psi, axes=([0], [ax]))
        branches.append((proj, float(np.vdot(proj, proj).real)))
    if outcome is None:
        p1 = branches[1][1] / (branches[0][1] + branches[1][1])
        outcome = int(rng.random() < p1)
    proj, p = branches[outcome]
    if p > 1e-14:
        br.psi = proj / math.sqrt(p)
    else:
        br.psi = proj
    br.live.pop(ax)
    if outcome:
        cx, cz = prog.corrections[j]
        br.fx ^= cx
        br.fz ^= cz
    return outcome, p


def _finish(prog: _Program, br: _Branch) -> StateVector:
    if sorted(br.live) != sorted(prog.outputs):
        raise OracleError(f"unmeasured non-readout qubits remain: {sorted(set(br.live) - set(prog.outputs))}")
    psi = np.transpose(br.psi, [br.live.index(v) for v in prog.outputs])
    for q, v in enumerate(prog.outputs):
        if br.fz >> v & 1:
            psi = _apply_1q(psi, _Z, q)
        if br.fx >> v & 1:
            psi = _apply_1q(psi, _X, q)
    return StateVector.from_tensor(psi)


def _frame_list(prog: _Program, br: _Branch) -> list[tuple[int, int]]:
    return [(br.fx >> v & 1, br.fz >> v & 1) for v in prog.outputs]


def _input_for(lattice: Lattice, input) -> StateVector:
    n = lattice.n_wires
    if input is None:
        input = lattice.input_state
        if input == "psi":
            raise ValueError("lattice input is |psi>; pass the input state explicitly")
    return prepare_input(input, n)


def simulate_mbqc(lattice: Lattice, input=None, outcomes=None, seed: int = 0) -> MbqcRun:
    """Run one measurement history on ``lattice``.

    ``outcomes`` forces the results (a sequence in measurement order, or a
    mapping vertex -> bit); otherwise they are drawn with Born probabilities
    from a generator seeded with ``seed``. The returned state is the readout
    register after byproduct correction.
    """
    prog = _Program(lattice)
    rng = np.random.default_rng(seed)
    if outcomes is not None and not isinstance(outcomes, dict):
        outcomes = dict(zip(prog.order, outcomes))
    br = _start(prog, _input_for(lattice, input))
    got = {}
    for j in prog.order:
        forced = None if outcomes is None else outcomes[j]
        s, p = _measure(prog, br, j, forced, rng)
        if p <= 1e-14:
            raise OracleError(f"forced outcome {s} at vertex {j} has zero probability")
        got[j] = s
    return MbqcRun(list(prog.order), got, _frame_list(prog, br), _finish(prog, br))


class _Batch:
    """Many outcome histories at once: ``psi`` carries a leading history axis."""

    def __init__(self, prog: _Program, input_state: StateVector):
        self.prog = prog
        self.psi = input_state.tensor().astype(complex)[None, ...]
        self.live = list(prog.inputs)
        self.added = set(prog.inputs)
        n = prog.graph.n
        self.fx = np.zeros((1, n), dtype=bool)
        self.fz = np.zeros((1, n), dtype=bool)

    def add(self, v: int):
        if v in self.added:
            return
        self.psi = np.multiply.outer(self.psi, _PLUS)
        self.live.append(v)
        self.added.add(v)
        last = self.psi.ndim - 1
        for w in self.prog.graph.neighbours(v):
            if w not in self.added:
                continue
            if w not in self.live:
                raise OracleError(f"vertex {w} was measured before its neighbour {v} was entangled")
            idx = [slice(None)] * self.psi.ndim
            idx[1 + self.live.index(w)] = 1
            idx[last] = 1
            self.psi[tuple(idx)] *= -1

    def measure(self, j: int, rng):
        """Measure ``j`` on every history; ``rng=None`` keeps both outcomes of each."""
        prog = self.prog
        self.add(j)
        for w in prog.graph.neighbours(j):
            self.add(w)
        a = prog.angles[j]
        phi = np.where(self.fx[:, j], -a, a) + np.where(self.fz[:, j], math.pi, 0.0)
        ax = 1 + self.live.index(j)
        t = np.moveaxis(self.psi, ax, 1)
        e = np.exp(-1j * phi).reshape((-1,) + (1,) * (t.ndim - 2))
        p0 = (t[:, 0] + e * t[:, 1]) / math.sqrt(2)
        p1 = (t[:, 0] - e * t[:, 1]) / math.sqrt(2)
        axes = tuple(range(1, p0.ndim))
        w0 = np.sum(np.abs(p0) ** 2, axis=axes) if axes else np.abs(p0) ** 2
        w1 = np.sum(np.abs(p1) ** 2, axis=axes) if axes else np.abs(p1) ** 2
        self.live.pop(ax - 1)
        cx, cz = prog.correction_bits[j]
        if rng is None:
            psi = np.concatenate([p0, p1])
            w = np.concatenate([w0, w1])
            fx = np.concatenate([self.fx, self.fx ^ cx])
            fz = np.concatenate([self.fz, self.fz ^ cz])
            keep = w > 1e-14
            self.psi, w, self.fx, self.fz = psi[keep], w[keep], fx[keep], fz[keep]
        else:
            one = rng.random(len(w0)) < w1 / (w0 + w1)
            mask = one.reshape((-1,) + (1,) * (p0.ndim - 1))
            self.psi = np.where(mask, p1, p0)
            w = np.where(one, w1, w0)
            self.fx = self.fx ^ (one[:, None] & cx)
            self.fz = self.fz ^ (one[:, None] & cz)
        self.psi = self.psi / np.sqrt(w).reshape((-1,) + (1,) * (self.psi.ndim - 1))

    def finish(self) -> np.ndarray:
        """Corrected readout amplitudes, one row per history."""
        prog = self.prog
        if sorted(self.live) != sorted(prog.outputs):
            raise OracleError(f"unmeasured non-readout qubits remain: {sorted(set(self.live) - set(prog.outputs))}")
        psi = np.transpose(self.psi, [0] + [1 + self.live.index(v) for v in prog.outputs])
        for q, v in enumerate(prog.outputs):
            shape = (-1,) + (1,) * (psi.ndim - 1)
            z = self.fz[:, v].reshape(shape)
            sign = np.where(np.arange(2) == 1, -1.0, 1.0).reshape((1,) * (1 + q) + (2,) + (1,) * (psi.ndim - 2 - q))
            psi = np.where(z, psi * sign, psi)
            x = self.fx[:, v].reshape(shape)
            psi = np.where(x, np.flip(psi, axis=1 + q), psi)
        return psi.reshape(len(psi), -1)


def _histories(prog: _Program, input_state: StateVector, exhaustive: bool, n_samples: int, seed: int) -> np.ndarray:
    """Corrected readout states, one row per outcome history.

    Exhaustive mode keeps every branch with nonzero probability; otherwise
    ``n_samples`` histories are drawn with Born probabilities.
    """
    batch = _Batch(prog, input_state)
    rng = None
    if not exhaustive:
        rng = np.random.default_rng(seed)
        batch.psi = np.repeat(batch.psi, n_samples, axis=0)
        batch.fx = np.repeat(batch.fx, n_samples, axis=0)
        batch.fz = np.repeat(batch.fz, n_samples, axis=0)
    for j in prog.order:
        batch.measure(j, rng)
    return batch.finish()


@dataclass
class VerifyReport:
    circuit_id: str
    passed: bool
    worst_fidelity: float
    history_count: int
    exhaustive: bool
    inputs: int
    reason: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        mode = "exhaustive" if self.exhaustive else "sampled"
        text = (
            f"{verdict} {self.circuit_id or '<circuit>'}: worst fidelity {self.worst_fidelity:.12f} "
            f"over {self.history_count} {mode} histories x {self.inputs} inputs"
        )
        return text + (f" ({self.reason})" if self.reason else "")


def default_inputs(n: int, seed: int = 0) -> list:
    return ["0", "+", random_product_state(n, seed)]


def check_lattice(lattice: Lattice, reference, inputs, samples: int = SAMPLED_HISTORIES, seed: int = 0,
                  exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> VerifyReport:
    """Compare every history's corrected readout with ``reference(input) -> StateVector``."""
    prog = _Program(lattice)
    exhaustive = len(prog.order) <= exhaustive_limit
    worst, count, reason = 1.0, 0, ""
    for k, inp in enumerate(inputs):
        state = _input_for(lattice, inp)
        want = reference(state)
        got = _histories(prog, state, exhaustive, samples, seed + k)
        count += len(got)
        worst = min(worst, float(np.min(np.abs(got.conj() @ want.amplitudes) ** 2)))
        spread = float(np.min(np.abs(got.conj() @ got[0]) ** 2))
        if spread < 1 - FIDELITY_TOL and not reason:
            reason = "readout depends on the outcome history"
    passed = worst >= 1 - FIDELITY_TOL
    if not passed and not reason:
        reason = "readout differs from the circuit output"
    return VerifyReport(lattice.circuit_id, passed, worst, count, exhaustive, len(inputs), reason)


def check_determinism(lattice: Lattice, input=None, samples: int = SAMPLED_HISTORIES, seed: int = 0) -> float:
    """Worst fidelity of any corrected readout against the first; raises NonDeterministicResult."""
    prog = _Program(lattice)
    state = _input_for(lattice, input)
    got = _histories(prog, state, len(prog.order) <= EXHAUSTIVE_LIMIT, samples, seed)
    worst = float(np.min(np.abs(got.conj() @ got[0]) ** 2))
    if worst < 1 - FIDELITY_TOL:
        raise NonDeterministicResult(f"corrected readouts disagree (fidelity {worst:.3e})")
    return worst


def equivalent(circuit: Circuit, inputs=None, catalogue: PatternCatalogue | None = None, samples: int = SAMPLED_HISTORIES,
               seed: int = 0, report: bool = False):
    """Does the etched lattice compute what the circuit computes?

    Compares the corrected readout of every outcome history (all of them when
    at most 16 qubits are measured, otherwise ``samples`` seeded ones)
    against the circuit's output state, up to global phase, for each input.
    """
    lat = layout(circuit, catalogue)
    inputs = default_inputs(circuit.n_wires, seed) if inputs is None else list(inputs)
    rep = check_lattice(lat, lambda s: simulate_circuit(circuit, s), inputs, samples, seed)
    rep.circuit_id = circuit.id
    return rep if report else rep.passed
