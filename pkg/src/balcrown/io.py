"""Graph text format, result records and DOT rendering.

Graph files::

    # comment
    p vwg <n> <m>
    v <label> <weight>
    e <label1> <label2> [<edge weight>]

Labels are arbitrary whitespace-free tokens; they are mapped to dense ids in
order of their `v` lines. The optional edge weight (default 1) is only read
by the edge-partition command.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .errors import BadWeight, CountMismatch, DuplicateEdge, GraphSyntaxError
from .graph import WeightedGraph

SCHEMA = "v1"


@dataclass
class ParsedGraph:
    graph: WeightedGraph
    labels: list[str]
    edge_weights: dict[tuple[int, int], int] = field(default_factory=dict)

    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphSyntaxError(f"{what} {token!r} is not an integer", line) from None


def parse_graph(source: str | Path | IO[str]) -> ParsedGraph:
    """Read a graph file (path or open text stream)."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return _parse(fh)
    return _parse(source)


def parse_graph_text(text: str) -> ParsedGraph:
    return _parse(io.StringIO(text))


def _parse(stream: Iterable[str]) -> ParsedGraph:
    header = None
    labels: list[str] = []
    index: dict[str, int] = {}
    weights: list[int] = []
    raw_edges: list[tuple[str, str, int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        kind = tok[0]
        if header is None:
            if kind != "p":
                raise GraphSyntaxError("expected header 'p vwg <n> <m>' first", lineno)
            if len(tok) != 4 or tok[1] != "vwg":
                raise GraphSyntaxError("header must read 'p vwg <n> <m>'", lineno)
            n, m = _int(tok[2], lineno, "n"), _int(tok[3], lineno, "m")
            if n < 0 or m < 0:
                raise GraphSyntaxError("negative counts in header", lineno)
            header = (n, m, lineno)
            continue
        if kind == "p":
            raise GraphSyntaxError("second header line", lineno)
        if kind == "v":
            if len(tok) != 3:
                raise GraphSyntaxError("vertex line must read 'v <label> <weight>'", lineno)
            label = tok[1]
            if label in index:
                raise GraphSyntaxError(f"vertex {label!r} declared twice", lineno)
            try:
                w = int(tok[2])
            except ValueError:
                raise BadWeight(f"weight {tok[2]!r} is not an integer", lineno) from None
            if w < 1:
                raise BadWeight(f"weight {w} of {label!r} is not positive", lineno)
            index[label] = len(labels)
            labels.append(label)
            weights.append(w)
        elif kind == "e":
            if len(tok) not in (3, 4):
                raise GraphSyntaxError("edge line must read 'e <label1> <label2> [<weight>]'", lineno)
            ew = 1
            if len(tok) == 4:
                try:
                    ew = int(tok[3])
                except ValueError:
                    raise BadWeight(f"edge weight {tok[3]!r} is not an integer", lineno) from None
                if ew < 1:
                    raise BadWeight(f"edge weight {ew} is not positive", lineno)
            raw_edges.append((tok[1], tok[2], ew, lineno))
        else:
            raise GraphSyntaxError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise GraphSyntaxError("missing header line")
    n, m, hline = header
    if len(labels) != n:
        raise CountMismatch(f"header declares {n} vertices, found {len(labels)}", hline)
    edges: dict[tuple[int, int], int] = {}
    for a, b, ew, lineno in raw_edges:
        for lab in (a, b):
            if lab not in index:
                raise GraphSyntaxError(f"edge names undeclared vertex {lab!r}", lineno)
        u, v = index[a], index[b]
        if u == v:
            raise GraphSyntaxError(f"self-loop at {a!r}", lineno)
        key = (min(u, v), max(u, v))
        if key in edges:
            raise DuplicateEdge(f"edge {a} {b} repeated", lineno)
        edges[key] = ew
    if len(edges) != m:
        raise CountMismatch(f"header declares {m} edges, found {len(edges)}", hline)
    return ParsedGraph(WeightedGraph(weights, list(edges)), labels, edges)


def emit_graph(g: WeightedGraph, labels: list[str] | None = None,
               edge_weights: dict[tuple[int, int], int] | None = None) -> str:
    labels = labels or [str(v) for v in range(g.n)]
    lines = [f"p vwg {g.n} {g.m}"]
    lines += [f"v {labels[v]} {g.weights[v]}" for v in range(g.n)]
    for u, v in g.edges():
        ew = (edge_weights or {}).get((u, v))
        lines.append(f"e {labels[u]} {labels[v]}" + (f" {ew}" if ew is not None and ew != 1 else ""))
    return "\n".join(lines) + "\n"


# -- result records ---------------------------------------------------------

def graph_block(pg: ParsedGraph) -> dict:
    g = pg.graph
    edges = []
    for u, v in g.edges():
        ew = pg.edge_weights.get((u, v), 1)
        edges.append([pg.labels[u], pg.labels[v]] + ([ew] if ew != 1 else []))
    return {"vertices": [[pg.labels[v], g.weights[v]] for v in range(g.n)], "edges": edges}


def graph_from_block(block: dict) -> ParsedGraph:
    labels = [str(x[0]) for x in block["vertices"]]
    index = {lab: i for i, lab in enumerate(labels)}
    edges = {}
    for e in block["edges"]:
        u, v = index[str(e[0])], index[str(e[1])]
        edges[(min(u, v), max(u, v))] = int(e[2]) if len(e) > 2 else 1
    g = WeightedGraph([int(x[1]) for x in block["vertices"]], list(edges))
    return ParsedGraph(g, labels, edges)


def make_record(command: str, params: dict, pg: ParsedGraph, result: dict,
                certificate: dict, trace: dict | None = None, seconds: float = 0.0) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "result": result,
        "certificate": certificate,
        "trace": trace or {},
        "timing": {"seconds": round(seconds, 6)},
        "graph": graph_block(pg),
    }


def dump_record(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=False)


def load_record(source: str | Path | IO[str]) -> dict:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    return json.load(source)


# -- DOT output -------------------------------------------------------------

_PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
            "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"]


def to_dot(pg: ParsedGraph, groups: dict[int, str], title: str = "result",
           shapes: dict[int, str] | None = None) -> str:
    """Undirected DOT graph; vertices sharing a group label share a fill colour."""
    g = pg.graph
    names = sorted(set(groups.values()))
    colour = {name: _PALETTE[i % len(_PALETTE)] for i, name in enumerate(names)}
    out = [f'graph "{title}" {{', "  node [style=filled];"]
    for v in range(g.n):
        lab = pg.labels[v]
        grp = groups.get(v)
        attrs = [f'label="{lab} ({g.weights[v]})"']
        if grp is not None:
            attrs.append(f'fillcolor="{colour[grp]}"')
            attrs.append(f'group="{grp}"')
        if shapes and v in shapes:
            attrs.append(f"shape={shapes[v]}")
        out.append(f'  "{lab}" [{", ".join(attrs)}];')
    for u, v in g.edges():
        same = groups.get(u) is not None and groups.get(u) == groups.get(v)
        style = "" if same else " [color=gray60]"
        out.append(f'  "{pg.labels[u]}" -- "{pg.labels[v]}"{style};')
    out.append("}")
    return "\n".join(out) + "\n"
