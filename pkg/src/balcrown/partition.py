"""Splitting connected vertex sets: st-orderings, two-way splits and lambda-cut-vertices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import NotAnEdge, NotBiconnected, PreconditionViolated
from .graph import ConnectedPartition, WeightedGraph, connected_components, induced_weight


@dataclass(frozen=True)
class StOrdering:
    order: tuple[int, ...]
    s: int
    t: int

    def rank(self) -> dict[int, int]:
        return {v: i + 1 for i, v in enumerate(self.order)}


@dataclass(frozen=True)
class Divide:
    V1: frozenset[int]
    V2: frozenset[int]


@dataclass(frozen=True)
class CutVertex:
    x: int


DivideOrCut = Union[Divide, CutVertex]


def _local_adj(g: WeightedGraph, part: Iterable[int]) -> dict[int, list[int]]:
    members = part if isinstance(part, (set, frozenset)) else set(part)
    return {v: [u for u in g.adj[v] if u in members] for v in sorted(members)}


def articulation_points(adj: dict[int, list[int]]) -> list[int]:
    """Cut vertices of the graph given as a sorted-key adjacency dict (iterative Tarjan)."""
    pre: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    counter = 0
    for root in adj:
        if root in pre:
            continue
        pre[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u not in pre:
                    pre[u] = low[u] = counter
                    counter += 1
                    stack.append((u, v, iter(adj[u])))
                    advanced = True
                    break
                if u != parent and pre[u] < low[v]:
                    low[v] = pre[u]
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                if low[v] < low[parent]:
                    low[parent] = low[v]
                if parent == root:
                    root_children += 1
                elif low[v] >= pre[parent]:
                    cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return sorted(cuts)


def _st_order(adj: dict[int, list[int]], s: int, t: int) -> list[int]:
    # DFS from s taking the edge st first, then the lowpoint-driven list insertion
    pre = {s: 0}
    low_v = {s: s}
    parent = {s: -1}
    order = [s]
    first = [t] + [u for u in adj[s] if u != t]
    stack = [(s, iter(first))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for u in it:
            if u not in pre:
                pre[u] = len(order)
                order.append(u)
                parent[u] = v
                low_v[u] = u
                stack.append((u, iter(adj[u])))
                advanced = True
                break
            if u != parent[v] and pre[u] < pre[low_v[v]]:
                low_v[v] = u
        if advanced:
            continue
        stack.pop()
        p = parent[v]
        if p >= 0 and pre[low_v[v]] < pre[low_v[p]]:
            low_v[p] = low_v[v]
    nxt = {s: t, t: None}
    prv = {s: None, t: s}
    minus = {s: True}
    for v in order[2:]:
        p = parent[v]
        if minus.get(low_v[v], False):
            a = prv[p]
            prv[v], nxt[v] = a, p
            prv[p] = v
            if a is not None:
                nxt[a] = v
            minus[p] = False
        else:
            b = nxt[p]
            prv[v], nxt[v] = p, b
            nxt[p] = v
            if b is not None:
                prv[b] = v
            minus[p] = True
    out = []
    cur = s
    while prv[cur] is not None:
        cur = prv[cur]
    while cur is not None:
        out.append(cur)
        cur = nxt[cur]
    return out


def _is_biconnected(adj: dict[int, list[int]]) -> bool:
    if not adj:
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(adj) and not articulation_points(adj)


def st_ordering(g: WeightedGraph, s: int, t: int, part: Iterable[int] | None = None) -> StOrdering:
    adj = _local_adj(g, range(g.n) if part is None else part)
    if s not in adj or t not in adj or t not in adj[s]:
        raise NotAnEdge(f"({s},{t}) is not an edge")
    if not _is_biconnected(adj):
        raise NotBiconnected("graph is not 2-connected")
    return StOrdering(tuple(_st_order(adj, s, t)), s, t)


def check_st_ordering(g: WeightedGraph, st: StOrdering) -> bool:
    rank = st.rank()
    if rank.get(st.s) != 1 or rank.get(st.t) != len(st.order):
        return False
    for v in st.order:
        if v in (st.s, st.t):
            continue
        nb = [rank[u] for u in g.adj[v] if u in rank]
        if not nb or min(nb) > rank[v] or max(nb) < rank[v]:
            return False
    return True


def _split_by_prefix(order: list[int], weight: dict[int, int], lam: int) -> tuple[frozenset[int], frozenset[int]]:
    acc = 0
    for i, v in enumerate(order):
        acc += weight[v]
        if acc >= lam:
            return frozenset(order[: i + 1]), frozenset(order[i + 1:])
    raise PreconditionViolated("total weight below lambda")


def _check_split_pre(total: int, wmax: int, lam: int) -> None:
    if total <= 3 * (lam - 1):
        raise PreconditionViolated(f"weight {total} not above 3(lambda-1)")
    if wmax >= lam:
        raise PreconditionViolated("a vertex weighs at least lambda")


def biconnected_split(g: WeightedGraph, part: Iterable[int], lam: int) -> tuple[frozenset[int], frozenset[int]]:
    """Two connected sides of weight >= lam; the first weighs at most 2(lam-1)."""
    adj = _local_adj(g, part)
    weight = {v: g.weights[v] for v in adj}
    _check_split_pre(sum(weight.values()), max(weight.values(), default=0), lam)
    if not _is_biconnected(adj) or len(adj) < 2:
        raise PreconditionViolated("part is not 2-connected")
    s = next(iter(adj))
    order = _st_order(adj, s, adj[s][0])
    return _split_by_prefix(order, weight, lam)


def _lowpoint_tree(adj: dict[int, list[int]], weight: dict[int, int], root: int):
    """DFS tree from root with preorder, lowpoints, children, subtree weight and subtree minimum."""
    pre = {root: 0}
    low = {root: 0}
    parent = {root: -1}
    children: dict[int, list[int]] = {root: []}
    sub_w = dict(weight)
    sub_min = {v: v for v in adj}
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for u in it:
            if u not in pre:
                pre[u] = low[u] = len(pre)
                parent[u] = v
                children[u] = []
                children[v].append(u)
                stack.append((u, iter(adj[u])))
                advanced = True
                break
            if u != parent[v] and pre[u] < low[v]:
                low[v] = pre[u]
        if advanced:
            continue
        stack.pop()
        p = parent[v]
        if p >= 0:
            low[p] = min(low[p], low[v])
            sub_w[p] += sub_w[v]
            sub_min[p] = min(sub_min[p], sub_min[v])
    return pre, low, children, sub_w, sub_min


def divide_or_cut(g: WeightedGraph, part: Iterable[int], lam: int) -> DivideOrCut:
    """Either a two-part [lam, inf) split of `part` or a vertex whose removal leaves only light pieces.

    Cut vertices are examined in ascending id. One with a single heavy side
    and too little weight elsewhere is contracted together with its light
    pieces. Contraction creates no new cut vertices and leaves the pieces
    around every other cut vertex unchanged, so one DFS tree serves the whole scan.
    """
    members = frozenset(part)
    adj = _local_adj(g, members)
    weight = {v: g.weights[v] for v in adj}
    total = sum(weight.values())
    _check_split_pre(total, max(weight.values(), default=0), lam)
    if len(connected_components(g, members)) != 1:
        raise PreconditionViolated("part is not connected")
    root = next(iter(adj))
    pre, low, children, sub_w, sub_min = _lowpoint_tree(adj, weight, root)

    def expand(v: int, child: int | None) -> set[int]:
        # vertices of one piece of part - v; child None means the piece holding the root
        start = root if child is None else child
        seen = {v, start}
        stack = [start]
        while stack:
            for x in adj[stack.pop()]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        seen.discard(v)
        return seen

    absorbed: dict[int, set[int]] = {}
    dead: set[int] = set()
    for v in articulation_points(adj):
        if v in dead:
            continue
        pieces = []  # (weight, min vertex, child root)
        hang = 0
        for c in children[v]:
            if v == root or low[c] >= pre[v]:
                pieces.append((sub_w[c], sub_min[c], c))
                hang += sub_w[c]
        if v != root:
            pieces.append((total - weight[v] - hang, root, None))
        pieces.sort(key=lambda x: x[1])
        heavy = [pc for pc in pieces if pc[0] >= lam]
        light = [pc for pc in pieces if pc[0] < lam]
        if not heavy:
            return CutVertex(v)
        if len(heavy) >= 2:
            # the leftover pieces only touch v, so they travel with it
            side2 = frozenset(expand(v, heavy[1][2]))
            return Divide(members - side2, side2)
        if weight[v] + sum(pc[0] for pc in light) >= lam:
            side1 = frozenset(expand(v, heavy[0][2]))
            return Divide(side1, members - side1)
        blob = {v}
        for pc in light:
            blob |= expand(v, pc[2])
        for x in list(blob):
            if x != v and x in absorbed:
                del absorbed[x]
        absorbed[v] = blob
        dead |= blob
    # no cut vertex left: st-order the contracted graph
    rep = {x: v for v, blob in absorbed.items() for x in blob}
    cweight: dict[int, int] = {}
    cadj: dict[int, set[int]] = {}
    for x in adj:
        r = rep.get(x, x)
        cweight[r] = cweight.get(r, 0) + weight[x]
        cadj.setdefault(r, set())
        for y in adj[x]:
            ry = rep.get(y, y)
            if ry != r:
                cadj[r].add(ry)
    sorted_adj = {v: sorted(cadj[v]) for v in sorted(cadj)}
    s = next(iter(sorted_adj))
    order = _st_order(sorted_adj, s, sorted_adj[s][0])
    v1, v2 = _split_by_prefix(order, cweight, lam)

    def unwind(vs) -> frozenset[int]:
        out: set[int] = set()
        for x in vs:
            out |= absorbed.get(x, {x})
        return frozenset(out)

    return Divide(unwind(v1), unwind(v2))


def validate_cvp(g: WeightedGraph, p: ConnectedPartition | Iterable[Iterable[int]], lo: int,
                 hi: float | int | None, cover: Iterable[int] | None) -> bool:
    """True iff the parts are disjoint, connected, weigh within [lo, hi] and exactly cover `cover`.

    `hi=None` means no upper bound; `cover=None` skips the cover check (packing).
    """
    return not cvp_violations(g, p, lo, hi, cover)


def cvp_violations(g: WeightedGraph, p, lo: int, hi, cover) -> list[str]:
    parts = [frozenset(x) for x in (p.parts if isinstance(p, ConnectedPartition) else p)]
    out = []
    seen: set[int] = set()
    for i, part in enumerate(parts):
        if not part:
            out.append(f"part {i} is empty")
            continue
        if seen & part:
            out.append(f"part {i} overlaps an earlier part")
        seen |= part
        if any(not (0 <= v < g.n) for v in part):
            out.append(f"part {i} has an unknown vertex")
            continue
        if len(connected_components(g, part)) != 1:
            out.append(f"part {i} is disconnected")
        w = induced_weight(g, part)
        if w < lo:
            out.append(f"part {i} weighs {w} < {lo}")
        if hi is not None and w > hi:
            out.append(f"part {i} weighs {w} > {hi}")
    if cover is not None and seen != set(cover):
        out.append("parts do not cover the target set")
    return out
