"""Immutable vertex-weighted undirected graphs and basic traversals."""
from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DisconnectedInput

WEIGHT_LIMIT = 1 << 62


class WeightedGraph:
    """Simple undirected graph on vertices 0..n-1 with positive integer weights.

    Adjacency lists are stored sorted ascending so every traversal visits
    neighbors in a fixed order.
    """

    __slots__ = ("n", "weights", "adj", "_total", "_m")

    def __init__(self, weights: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        weights = tuple(int(w) for w in weights)
        n = len(weights)
        for v, w in enumerate(weights):
            if w < 1:
                raise ValueError(f"vertex {v} has non-positive weight {w}")
        total = sum(weights)
        if total >= WEIGHT_LIMIT:
            raise ValueError("total weight exceeds 2^62")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.weights = weights
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._total = total
        self._m = sum(len(a) for a in self.adj) // 2

    @property
    def m(self) -> int:
        return self._m

    def total_weight(self) -> int:
        return self._total

    def weight(self, v: int) -> int:
        return self.weights[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def vertices(self) -> range:
        return range(self.n)

    def subgraph(self, keep: Iterable[int]) -> tuple["WeightedGraph", list[int]]:
        """Induced subgraph on `keep`, relabelled densely. Returns (graph, old ids)."""
        old = sorted(set(keep))
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u in old for v in self.adj[u] if v in index and u < v]
        return WeightedGraph([self.weights[v] for v in old], edges), old

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.weights == other.weights and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.weights, self.adj))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m}, w={self._total})"


def connected_components(g: WeightedGraph, restrict: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Components of g[restrict], ordered by their smallest vertex id."""
    if restrict is None:
        allowed = None
        order: Iterable[int] = range(g.n)
    else:
        allowed = restrict if isinstance(restrict, (set, frozenset)) else set(restrict)
        order = sorted(allowed)
    seen: set[int] = set()
    out = []
    adj = g.adj
    for s in order:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for x in adj[u]:
                if x not in seen and (allowed is None or x in allowed):
                    seen.add(x)
                    comp.append(x)
                    stack.append(x)
        out.append(frozenset(comp))
    return out


def induced_weight(g: WeightedGraph, s: Iterable[int]) -> int:
    w = g.weights
    return sum(w[v] for v in s)


def is_connected(g: WeightedGraph, s: Iterable[int]) -> bool:
    s = s if isinstance(s, (set, frozenset)) else set(s)
    if not s:
        return False
    return len(connected_components(g, s)) == 1


def spanning_tree(g: WeightedGraph, root: int, restrict: Iterable[int] | None = None) -> dict[int, int]:
    """BFS parent map of g[restrict] rooted at `root`; neighbors explored by ascending id."""
    allowed = set(range(g.n)) if restrict is None else set(restrict)
    if root not in allowed:
        raise DisconnectedInput(f"root {root} not in restricted set")
    parent: dict[int, int] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for x in g.adj[u]:
            if x in allowed and x not in seen:
                seen.add(x)
                parent[x] = u
                queue.append(x)
    if len(seen) != len(allowed):
        raise DisconnectedInput("restricted vertex set is not connected")
    return parent


def bfs_order(parent: dict[int, int], root: int) -> list[int]:
    """Vertices of a parent-map tree in BFS order (children ascending)."""
    children: dict[int, list[int]] = {}
    for c, p in parent.items():
        children.setdefault(p, []).append(c)
    order = [root]
    i = 0
    while i < len(order):
        order.extend(sorted(children.get(order[i], ())))
        i += 1
    return order


@dataclass
class ConnectedPartition:
    """Disjoint connected vertex sets; `covering` marks a full partition rather than a packing."""

    parts: list[frozenset[int]] = field(default_factory=list)
    covering: bool = True

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def weights(self, g: WeightedGraph) -> list[int]:
        return [induced_weight(g, p) for p in self.parts]

    def union(self) -> frozenset[int]:
        out: set[int] = set()
        for p in self.parts:
            out |= p
        return frozenset(out)


def line_graph(n: int, edges: list[tuple[int, int]], edge_weights: list[int]) -> WeightedGraph:
    """Vertex-weighted line graph: one vertex per edge, adjacent when edges share an endpoint."""
    incident: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        incident[u].append(i)
        incident[v].append(i)
    lg_edges = set()
    for inc in incident:
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                x, y = inc[a], inc[b]
                lg_edges.add((min(x, y), max(x, y)))
    return WeightedGraph(edge_weights, sorted(lg_edges))
