"""Instance generators and a trace recorder shared by the test modules."""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import networkx as nx

from balcrown import applications, engine
from balcrown.engine import Completed
from balcrown.graph import WeightedGraph


def random_connected(rng: random.Random, n: int, wmax: int = 1, extra: float = 1.0,
                     m: int | None = None) -> WeightedGraph:
    """Random spanning tree plus about extra*n further edges (or exactly m edges); weights in [1, wmax]."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    want = min(n * (n - 1) // 2, m if m is not None else n - 1 + int(extra * n))
    while len(edges) < want:
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    return WeightedGraph([rng.randint(1, wmax) for _ in range(n)], sorted(edges))


def random_graph(rng: random.Random, n: int, p: float, wmax: int = 1) -> WeightedGraph:
    """Erdos-Renyi G(n, p), possibly disconnected."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return WeightedGraph([rng.randint(1, wmax) for _ in range(n)], edges)


def from_nx(G: nx.Graph, weights=None) -> WeightedGraph:
    n = G.number_of_nodes()
    return WeightedGraph(weights or [1] * n, [(min(u, v), max(u, v)) for u, v in G.edges()])


def connected_atlas(max_n: int, min_n: int = 1):
    """Every connected graph on min_n..max_n vertices (max_n <= 7), one per isomorphism class."""
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(G):
            yield from_nx(G)


DATA = Path(__file__).parent / "data"


def extend_by_one(graphs: list[nx.Graph]) -> list[nx.Graph]:
    """Connected graphs on n+1 vertices, up to isomorphism, from all connected graphs on n.

    Every connected graph has a vertex whose removal keeps it connected, so
    attaching a new vertex to every nonempty neighbour set reaches them all.
    """
    buckets: dict = {}
    out = []
    for G in graphs:
        n = G.number_of_nodes()
        for mask in range(1, 1 << n):
            H = G.copy()
            H.add_edges_from((n, i) for i in range(n) if mask >> i & 1)
            key = (H.number_of_edges(), tuple(sorted(d for _, d in H.degree())),
                   nx.weisfeiler_lehman_graph_hash(H, iterations=3))
            seen = buckets.setdefault(key, [])
            if not any(nx.is_isomorphic(H, X) for X in seen):
                seen.append(H)
                out.append(H)
    return out


def connected_eight():
    """All 11117 connected graphs on 8 vertices, cached as graph6 lines."""
    path = DATA / "connected8.g6"
    if not path.exists():
        base = [G for G in nx.graph_atlas_g() if G.number_of_nodes() == 7 and nx.is_connected(G)]
        DATA.mkdir(exist_ok=True)
        with open(path, "wb") as fh:
            for H in extend_by_one(base):
                fh.write(nx.to_graph6_bytes(H, header=False))
    with open(path, "rb") as fh:
        return [from_nx(nx.from_graph6_bytes(line.strip())) for line in fh if line.strip()]


@dataclass
class RunRecord:
    n: int
    total: int
    lam: int
    outers: list[int]
    steps: int
    inners: list[int] | None = None

    @property
    def k(self) -> int:
        return min(self.total // self.lam, self.n)

    def problems(self) -> list[str]:
        out = []
        if any(a > b for a, b in zip(self.outers, self.outers[1:])):
            out.append(f"outer index decreased: {self.outers}")
        pairs = zip(self.outers, self.outers[1:], self.inners or (), (self.inners or ())[1:])
        if any(o1 == o2 and i1 > i2 for o1, o2, i1, i2 in pairs):
            out.append(f"inner index decreased at fixed outer index: {self.inners}")
        if self.steps > self.k ** 2:
            out.append(f"{self.steps} divide/cut steps exceed k^2 = {self.k ** 2}")
        return out


def record_of(g, lam, res) -> RunRecord:
    return RunRecord(g.n, g.total_weight(), lam, [t.outer for t in res.trace], res.divide_cut_steps,
                     [t.inner for t in res.trace])


class TraceRecorder:
    """Wraps find_bcd so every call made by the solvers leaves a RunRecord."""

    def __init__(self):
        self.runs: list[RunRecord] = []
        self._orig = engine.find_bcd

    def find_bcd(self, g, lam, outer_cap=None, check=True):
        res = self._orig(g, lam, outer_cap=outer_cap, check=check)
        self.runs.append(record_of(g, lam, res))
        return res

    def __enter__(self):
        applications.find_bcd = self.find_bcd
        return self

    def __exit__(self, *exc):
        applications.find_bcd = self._orig
        return False


def completed(res) -> bool:
    return isinstance(res, Completed)
