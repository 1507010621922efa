import io
import json
import random

import pytest

from balcrown.errors import BadWeight, CountMismatch, DuplicateEdge, GraphSyntaxError
from balcrown.graph import WeightedGraph
from balcrown.io import (dump_record, emit_graph, graph_block, graph_from_block, load_record, make_record,
                         parse_graph, parse_graph_text, to_dot)
from helpers import random_graph

TRIANGLE = """# triangle
p vwg 3 3
v x 1
v y 1
v z 1
e x y
e y z
e x z
"""


def test_triangle():
    pg = parse_graph_text(TRIANGLE)
    assert (pg.graph.n, pg.graph.m) == (3, 3)
    assert pg.labels == ["x", "y", "z"]
    assert pg.index() == {"x": 0, "y": 1, "z": 2}


def test_parse_from_path_and_stream(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text(TRIANGLE)
    assert parse_graph(path).graph == parse_graph(io.StringIO(TRIANGLE)).graph
    assert parse_graph(str(path)).graph.m == 3


@pytest.mark.parametrize("text, error, line", [
    ("p vwg 2 2\nv x 1\nv y 1\ne x y\ne y x\n", DuplicateEdge, 5),
    ("p vwg 2 0\nv x 1\n", CountMismatch, 1),
    ("p vwg 1 0\nv x 0\n", BadWeight, 2),
    ("p vwg 1 0\nv x one\n", BadWeight, 2),
    ("v x 1\n", GraphSyntaxError, 1),
    ("p vwg 2 1\nv x 1\nv y 1\ne x x\n", GraphSyntaxError, 4),
    ("p vwg 2 1\nv x 1\nv y 1\ne x w\n", GraphSyntaxError, 4),
    ("p vwg 1 0\nv x 1\nq\n", GraphSyntaxError, 3),
    ("p vwg 2 1\nv x 1\nv x 1\n", GraphSyntaxError, 3),
    ("p vwg 2 2\nv x 1\nv y 1\ne x y\n", CountMismatch, 1),
    ("p vwg 2 1\nv x 1\nv y 1\ne x y 0\n", BadWeight, 4),
])
def test_parse_errors(text, error, line):
    with pytest.raises(error) as info:
        parse_graph_text(text)
    assert info.value.line == line


def test_missing_header():
    with pytest.raises(GraphSyntaxError):
        parse_graph_text("# nothing\n")


def test_edge_weights():
    pg = parse_graph_text("p vwg 3 2\nv a 1\nv b 1\nv c 1\ne a b 4\ne b c\n")
    assert pg.edge_weights == {(0, 1): 4, (1, 2): 1}


def test_round_trip():
    rng = random.Random(71)
    for _ in range(50):
        g = random_graph(rng, rng.randint(0, 12), 0.3, wmax=9)
        labels = [f"n{rng.randint(0, 999)}_{v}" for v in range(g.n)]
        pg = parse_graph_text(emit_graph(g, labels))
        assert pg.graph == g and pg.labels == labels


def test_record_round_trip(tmp_path):
    pg = parse_graph_text(TRIANGLE)
    rec = make_record("bcd", {"lambda": 2}, pg, {"verdict": "Completed"}, {"C": []})
    assert rec["schema"] == "v1"
    path = tmp_path / "r.json"
    path.write_text(dump_record(rec))
    back = load_record(path)
    assert back == json.loads(dump_record(rec))
    assert graph_from_block(back["graph"]).graph == pg.graph
    assert graph_from_block(graph_block(pg)).labels == pg.labels


def test_dot_output():
    pg = parse_graph_text(TRIANGLE)
    dot = to_dot(pg, {0: "R0", 1: "R0", 2: "H"}, "bcd", {2: "box"})
    assert dot.startswith('graph "bcd" {')
    assert '"x" -- "y";' in dot and "shape=box" in dot
    assert dot.count("fillcolor") == 3
