"""DOT and SVG drawings of a lattice.

Every qubit sits at its (row, col) position. Styling:

* solid fill: Y or other non-X plane measurements (the qubits doing a pattern's work)
* open: X measurements that carry the state along a wire
* thick red ring: readout qubits
* faint grey: excised qubits (only drawn with ``show_excised``)
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .layout import Lattice, Role

SPACING = 30
RADIUS = 9


class UnknownFormat(ValueError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    format: str = "svg"
    show_excised: bool = True

    def __post_init__(self):
        if self.format not in ("dot", "svg"):
            raise UnknownFormat(f"unknown render format {self.format!r}; use 'dot' or 'svg'")


def cell_style(lattice: Lattice, row: int, col: int) -> str:
    """One of ``excised``, ``readout``, ``solid``, ``open``."""
    role = Role(int(lattice.roles[row, col]))
    if role is Role.EXCISED:
        return "excised"
    if role is Role.READOUT:
        return "readout"
    return "open" if lattice.label_at(row, col).basis == "X" else "solid"


def _edges(lattice: Lattice):
    occ = lattice.occupied
    for r in range(lattice.rows):
        for c in range(lattice.cols - 1):
            if occ[r, c] and occ[r, c + 1]:
                yield (r, c), (r, c + 1)
    for r in range(lattice.rows):
        for c in range(lattice.cols):
            if lattice.roles[r, c] == Role.CNOT_MIDDLE:
                for rn in (r - 1, r + 1):
                    if 0 <= rn < lattice.rows and occ[rn, c]:
                        yield (rn, c), (r, c)


_DOT_STYLE = {
    "excised": 'style="dashed", color="gray80", fontcolor="gray80"',
    "readout": 'shape=doublecircle, color="red", penwidth=2',
    "solid": 'style="filled", fillcolor="black", fontcolor="white"',
    "open": 'style="solid"',
}

_SVG_STYLE = {
    "excised": 'fill="none" stroke="#cccccc" stroke-dasharray="2,2"',
    "readout": 'fill="white" stroke="#cc0000" stroke-width="3"',
    "solid": 'fill="black" stroke="black"',
    "open": 'fill="white" stroke="black"',
}


def _visible(lattice: Lattice, spec: RenderSpec):
    for r in range(lattice.rows):
        for c in range(lattice.cols):
            style = cell_style(lattice, r, c)
            if style == "excised" and not spec.show_excised:
                continue
            yield r, c, style


def to_dot(lattice: Lattice, spec: RenderSpec = RenderSpec("dot")) -> str:
    name = "lattice"
    lines = [f"graph {name} {{", '  node [shape=circle, label="", width=0.25, fixedsize=true];']
    for r, c, style in _visible(lattice, spec):
        label = escape(str(lattice.label_at(r, c)))
        lines.append(f'  q_{r}_{c} [pos="{c},{-r}!", tooltip="{label}", {_DOT_STYLE[style]}];')
    for (r1, c1), (r2, c2) in _edges(lattice):
        lines.append(f"  q_{r1}_{c1} -- q_{r2}_{c2};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(lattice: Lattice, spec: RenderSpec = RenderSpec("svg")) -> str:
    width = (lattice.cols + 1) * SPACING
    height = (lattice.rows + 1) * SPACING

    def xy(r, c):
        return (c + 1) * SPACING, (r + 1) * SPACING

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f"<title>{escape(lattice.circuit_id or 'lattice')}</title>",
        '<g class="edges" stroke="black" stroke-width="1.5">',
    ]
    for a, b in _edges(lattice):
        (x1, y1), (x2, y2) = xy(*a), xy(*b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append('<g class="qubits">')
    for r, c, style in _visible(lattice, spec):
        x, y = xy(r, c)
        label = escape(str(lattice.label_at(r, c)))
        out.append(
            f'<circle class="qubit {style}" data-row="{r}" data-col="{c}" cx="{x}" cy="{y}" r="{RADIUS}" '
            f"{_SVG_STYLE[style]}><title>{label}</title></circle>"
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(lattice: Lattice, spec: RenderSpec) -> str:
    if spec.format == "dot":
        return to_dot(lattice, spec)
    if spec.format == "svg":
        return to_svg(lattice, spec)
    raise UnknownFormat(spec.format)
