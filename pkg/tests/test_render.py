import xml.etree.ElementTree as ET

import pydot
import pytest

from circuit_etch.layout import layout
from circuit_etch.render import RenderSpec, UnknownFormat, cell_style, render

SVG = "{http://www.w3.org/2000/svg}"


def circles(svg_text):
    root = ET.fromstring(svg_text)
    return root.findall(f".//{SVG}circle")


def test_svg_shows_every_cell(ghz3):
    nodes = circles(render(layout(ghz3), RenderSpec("svg", show_excised=True)))
    assert len(nodes) == 85
    styles = [n.get("class").split()[1] for n in nodes]
    assert styles.count("excised") == 32
    assert styles.count("readout") == 3
    positions = {(n.get("cx"), n.get("cy")) for n in nodes}
    assert len(positions) == 85


def test_svg_hides_excised(ghz3):
    nodes = circles(render(layout(ghz3), RenderSpec("svg", show_excised=False)))
    assert len(nodes) == 53
    assert not [n for n in nodes if "excised" in n.get("class")]


def test_styles_follow_labels(ghz3):
    lat = layout(ghz3)
    assert cell_style(lat, 1, 0) == "excised"
    assert cell_style(lat, 0, 16) == "readout"
    assert cell_style(lat, 0, 1) == "solid"  # H pattern Y measurement
    assert cell_style(lat, 4, 3) == "open"  # wire padding


def test_dot_parses(ghz3):
    text = render(layout(ghz3), RenderSpec("dot", show_excised=False))
    (graph,) = pydot.graph_from_dot_data(text)
    nodes = [n for n in graph.get_nodes() if n.get_name().startswith("q_")]
    assert len(nodes) == 53
    assert len(graph.get_edges()) == 52
    assert all(n.get("pos") for n in nodes)


def test_unknown_format():
    with pytest.raises(UnknownFormat):
        RenderSpec("png")
