"""Graph states built from laid-out lattices, and their stabilizer generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .layout import Lattice, Role
from .patterns import MeasurementLabel


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    row: int
    col: int
    label: MeasurementLabel
    role: Role = Role.WIRE


class GraphState:
    """Simple undirected graph whose vertices are lattice qubits.

    Vertex ids run 0..n-1. ``edges`` holds ``(u, v)`` pairs with ``u < v``.
    """

    def __init__(self, vertices: Sequence[Vertex], edges: Iterable[tuple[int, int]]):
        self.vertices = tuple(vertices)
        n = len(self.vertices)
        for i, v in enumerate(self.vertices):
            if v.id != i:
                raise GraphError(f"vertex ids must run 0..n-1; position {i} holds id {v.id}")
        canon = []
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a missing vertex")
            canon.append((min(u, v), max(u, v)))
        self.edges = frozenset(canon)
        if len(self.edges) != len(canon):
            raise GraphError("parallel edges are not allowed")
        self._adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(self.edges):
            self._adj[u].append(v)
            self._adj[v].append(u)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbours(self, v: int) -> list[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def adjacency(self) -> sparse.csr_matrix:
        n = self.n
        if not self.edges:
            return sparse.csr_matrix((n, n), dtype=np.uint8)
        e = np.array(sorted(self.edges), dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return sparse.csr_matrix((np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(n, n))

    def inputs(self) -> list[int]:
        return [v.id for v in self.vertices if v.role is Role.INPUT]

    def outputs(self) -> list[int]:
        return [v.id for v in self.vertices if v.role is Role.READOUT]

    @classmethod
    def from_edges(cls, n: int, edges) -> "GraphState":
        """Bare graph with every vertex labelled as an X-measured wire qubit."""
        verts = [Vertex(i, 0, i, MeasurementLabel("X")) for i in range(n)]
        return cls(verts, edges)

    def __repr__(self) -> str:
        return f"GraphState(n={self.n}, edges={len(self.edges)})"


def build_graph_state(lattice: Lattice) -> GraphState:
    """Vertices are the non-excised cells in row-major order.

    Edges join horizontally adjacent occupied cells and connect each CNOT
    middle qubit to the cells directly above and below it.
    """
    occ = lattice.occupied
    ids = np.full(occ.shape, -1, dtype=np.int64)
    rr, cc = np.nonzero(occ)
    ids[rr, cc] = np.arange(len(rr))
    vertices = [
        Vertex(i, int(r), int(c), lattice.label_at(r, c), Role(int(lattice.roles[r, c])))
        for i, (r, c) in enumerate(zip(rr, cc))
    ]
    horiz = occ[:, :-1] & occ[:, 1:]
    hr, hc = np.nonzero(horiz)
    edges = list(zip(ids[hr, hc].tolist(), ids[hr, hc + 1].tolist()))
    mr, mc = np.nonzero(lattice.roles == Role.CNOT_MIDDLE)
    for r, c in zip(mr.tolist(), mc.tolist()):
        for rn in (r - 1, r + 1):
            if 0 <= rn < lattice.rows and occ[rn, c]:
                edges.append((int(ids[rn, c]), int(ids[r, c])))
    return GraphState(vertices, edges)


@dataclass(frozen=True)
class PauliString:
    """Sparse Pauli operator: X on ``x``, Z on ``z`` (Y where both), times ``phase``."""

    n: int
    x: frozenset = frozenset()
    z: frozenset = frozenset()
    phase: complex = 1

    def letter(self, i: int) -> str:
        return "IXZY"[(i in self.x) + 2 * (i in self.z)]

    def __str__(self) -> str:
        sign = {1: "", -1: "-", 1j: "i", -1j: "-i"}.get(self.phase, f"({self.phase})")
        return sign + "".join(self.letter(i) for i in range(self.n))

    def commutes(self, other: "PauliString") -> bool:
        return (len(self.x & other.z) + len(self.z & other.x)) % 2 == 0

    @classmethod
    def from_str(cls, text: str) -> "PauliString":
        phase = 1
        for prefix, p in (("-i", -1j), ("+i", 1j), ("i", 1j), ("-", -1), ("+", 1)):
            if text.startswith(prefix):
                phase, text = p, text[len(prefix) :]
                break
        x = {i for i, ch in enumerate(text) if ch in "XY"}
        z = {i for i, ch in enumerate(text) if ch in "ZY"}
        if set(text) - set("IXYZ"):
            raise ValueError(f"not a Pauli string: {text!r}")
        return cls(len(text), frozenset(x), frozenset(z), phase)


def stabilizer_generators(graph: GraphState) -> list[PauliString]:
    """One generator per vertex: X on the vertex, Z on each neighbour."""
    n = graph.n
    return [PauliString(n, frozenset((i,)), frozenset(graph.neighbours(i))) for i in range(n)]


def _symplectic(gens: Sequence[PauliString], n: int):
    def mat(attr):
        rows, cols = [], []
        for k, g in enumerate(gens):
            support = getattr(g, attr)
            rows.extend([k] * len(support))
            cols.extend(support)
        data = np.ones(len(rows), dtype=np.int64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(len(gens), n))

    return mat("x"), mat("z")


def generators_commute(gens: Sequence[PauliString]) -> bool:
    """True when every pair has even symplectic product."""
    if not gens:
        return True
    n = gens[0].n
    x, z = _symplectic(gens, n)
    prod = (x @ z.T + z @ x.T).tocoo()
    return not np.any(prod.data % 2)


def symplectic_rank(gens: Sequence[PauliString]) -> int:
    """GF(2) rank of the generators' [X | Z] matrix."""
    if not gens:
        return 0
    n = gens[0].n
    pivots: dict[int, int] = {}
    for g in gens:
        row = sum(1 << (n + i) for i in g.x) | sum(1 << i for i in g.z)
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


def to_edge_list(graph: GraphState) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(graph.edges))


def from_edge_list(text: str, n: int | None = None) -> GraphState:
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            u, v = line.split()
            edges.append((int(u), int(v)))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return GraphState.from_edges(n, edges)


def to_dot(graph: GraphState, name: str = "G") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in graph.vertices:
        lines.append(f'  {v.id} [label="{v.label}", pos="{v.col},{-v.row}!"];')
    for u, v in sorted(graph.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
