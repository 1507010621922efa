"""Balanced expansions on vertex-weighted bipartite graphs.

A fractional balanced expansion comes from one max-flow computation; the
rounded (integral) version is obtained by cancelling cycles in the support
of the fractional assignment and orienting the resulting forest.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import IsolatedBVertex, QBelowMaxWeight
from .netflow import FlowNetwork, max_flow, residual_reachable


class BipartiteWeighted:
    """Bipartite graph with sides A and B. Ids on the two sides are independent integers."""

    def __init__(self, a_weights: dict[int, int], b_weights: dict[int, int], edges):
        self.a_weights = dict(a_weights)
        self.b_weights = dict(b_weights)
        a_adj: dict[int, set[int]] = {a: set() for a in self.a_weights}
        b_adj: dict[int, set[int]] = {b: set() for b in self.b_weights}
        for a, b in edges:
            if a not in a_adj or b not in b_adj:
                raise ValueError(f"edge ({a},{b}) references an unknown vertex")
            a_adj[a].add(b)
            b_adj[b].add(a)
        self.a_adj = {a: sorted(s) for a, s in sorted(a_adj.items())}
        self.b_adj = {b: sorted(s) for b, s in sorted(b_adj.items())}
        for b, nb in self.b_adj.items():
            if not nb:
                raise IsolatedBVertex(f"B-vertex {b} has no neighbor")
        self.w_max_b = max(self.b_weights.values(), default=0)

    @property
    def A(self) -> list[int]:
        return list(self.a_adj)

    @property
    def B(self) -> list[int]:
        return list(self.b_adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, nb in self.a_adj.items() for b in nb]


@dataclass
class FractionalBalancedExpansion:
    A1: frozenset[int]
    A2: frozenset[int]
    g: dict[tuple[int, int], int]
    q: int

    def load(self, bg: BipartiteWeighted, a: int) -> int:
        return bg.a_weights[a] + sum(self.g.get((a, b), 0) for b in bg.a_adj[a])


@dataclass
class BalancedExpansion:
    A1: frozenset[int]
    A2: frozenset[int]
    f: dict[int, int]
    q: int

    def preimage(self, a: int) -> list[int]:
        return sorted(b for b, x in self.f.items() if x == a)

    def load(self, bg: BipartiteWeighted, a: int) -> int:
        return bg.a_weights[a] + sum(bg.b_weights[b] for b, x in self.f.items() if x == a)


@dataclass
class WeightedExpansionResult:
    H: frozenset[int]
    C: frozenset[int]
    f: dict[int, int] = field(default_factory=dict)


def fractional_balanced_expansion(bg: BipartiteWeighted, q: int) -> FractionalBalancedExpansion:
    if q < 0:
        raise ValueError("q must be non-negative")
    aw, bw = bg.a_weights, bg.b_weights
    g: dict[tuple[int, int], int] = {}

    heavy = {a for a in bg.a_adj if aw[a] >= q}
    stranded = set()
    for b, nb in bg.b_adj.items():
        if all(a in heavy for a in nb):
            stranded.add(b)
            g[(nb[0], b)] = bw[b]
    light = [a for a in bg.a_adj if a not in heavy]
    rest = [b for b in bg.b_adj if b not in stranded]
    if not light:
        return FractionalBalancedExpansion(frozenset(heavy), frozenset(), g, q)

    # node layout: 0 = s, 1 = t, then light A, then remaining B
    a_node = {a: 2 + i for i, a in enumerate(light)}
    b_node = {b: 2 + len(light) + i for i, b in enumerate(rest)}
    net = FlowNetwork(2 + len(light) + len(rest), 0, 1)
    sb_arc = {b: net.add_arc(0, b_node[b], bw[b]) for b in rest}
    ba_arc = {}
    for b in rest:
        for a in bg.b_adj[b]:
            if a in a_node:
                ba_arc[(a, b)] = net.add_arc(b_node[b], a_node[a], bw[b])
    at_arc = {a: net.add_arc(a_node[a], 1, q - aw[a]) for a in light}
    flow = max_flow(net)
    for key, arc in ba_arc.items():
        if flow[arc] > 0:
            g[key] = flow[arc]

    saturated = [a for a in light if flow[at_arc[a]] == net.caps[at_arc[a]]]
    if len(saturated) == len(light):
        a1 = set(light)
    elif all(flow[sb_arc[b]] == bw[b] for b in rest):
        a1 = set()
    else:
        # a saturated `a` joins A1 iff one more unit of capacity on a->t would
        # let the flow grow; since the flow is maximum, that happens exactly
        # when `a` is reachable from s in the residual graph
        reach = residual_reachable(net, flow, 0)
        a1 = {a for a in saturated if a_node[a] in reach}
    A1 = frozenset(heavy | a1)
    A2 = frozenset(a for a in light if a not in a1)
    return FractionalBalancedExpansion(A1, A2, g, q)


def check_fractional(bg: BipartiteWeighted, frac: FractionalBalancedExpansion) -> list[str]:
    """Violations of the fractional balanced expansion conditions (empty means valid)."""
    out = []
    if frac.A1 & frac.A2 or (frac.A1 | frac.A2) != set(bg.a_adj):
        out.append("A1/A2 do not partition A")
    for (a, b), x in frac.g.items():
        if x < 0:
            out.append(f"negative g on ({a},{b})")
        if b not in bg.a_adj.get(a, ()):
            out.append(f"g on non-edge ({a},{b})")
    for a in bg.a_adj:
        load = frac.load(bg, a)
        if a in frac.A1 and load < frac.q:
            out.append(f"A1 vertex {a} load {load} < q")
        if a in frac.A2 and load > frac.q:
            out.append(f"A2 vertex {a} load {load} > q")
    used = {b: 0 for b in bg.b_adj}
    for (a, b), x in frac.g.items():
        used[b] += x
    for b, u in used.items():
        if u > bg.b_weights[b]:
            out.append(f"B vertex {b} over capacity")
    sep = {b for b in bg.b_adj if used[b] < bg.b_weights[b]}
    sep |= {b for (a, b), x in frac.g.items() if x > 0 and a in frac.A1}
    for b in sep:
        for a in bg.b_adj[b]:
            if a not in frac.A1:
                out.append(f"B vertex {b} reaches A2 vertex {a}")
    return out


def _forest_path(adj: dict, src, dst) -> list | None:
    prev = {src: None}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        if u == dst:
            break
        for v in sorted(adj.get(u, ())):
            if v not in prev:
                prev[v] = u
                dq.append(v)
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def cancel_cycle(weights: list[int]) -> list[int]:
    """One cancellation on an even cycle given as its edge weights in cyclic order.

    The lightest edge (first on ties) drops to zero and the signs alternate
    from there, so each vertex on the cycle keeps its total.
    """
    k = len(weights)
    j = min(range(k), key=lambda i: (weights[i], i))
    x = weights[j]
    out = list(weights)
    for step in range(k):
        i = (j + step) % k
        out[i] += -x if step % 2 == 0 else x
    return out


def cycle_cancel_to_forest(bg: BipartiteWeighted, frac: FractionalBalancedExpansion,
                           skip_b: set[int] | frozenset[int] = frozenset()) -> dict[tuple[int, int], int]:
    """Edge weights with the same per-vertex sums whose positive support is a forest."""
    w = {e: x for e, x in sorted(frac.g.items()) if x > 0 and e[1] not in skip_b}
    adj: dict[tuple[str, int], set[tuple[str, int]]] = {}

    def key(u, v):
        # normalise a forest edge between an A node and a B node
        return (u[1], v[1]) if u[0] == "a" else (v[1], u[1])

    for (a, b) in sorted(w):
        if w.get((a, b), 0) <= 0:
            continue
        ua, vb = ("a", a), ("b", b)
        path = _forest_path(adj, vb, ua) if ua in adj and vb in adj else None
        if path is None:
            adj.setdefault(ua, set()).add(vb)
            adj.setdefault(vb, set()).add(ua)
            continue
        # cycle: a -> b, then the tree path b ... a
        cyc = [(a, b)] + [key(path[i], path[i + 1]) for i in range(len(path) - 1)]
        new = cancel_cycle([w[e] for e in cyc])
        for e, x in zip(cyc, new):
            w[e] = x
        if w[(a, b)] > 0:
            adj.setdefault(ua, set()).add(vb)
            adj.setdefault(vb, set()).add(ua)
        for e, x in zip(cyc[1:], new[1:]):
            if x == 0:
                adj[("a", e[0])].discard(("b", e[1]))
                adj[("b", e[1])].discard(("a", e[0]))
        # at least one zero edge appeared, so the support stays a forest
    return {e: x for e, x in w.items() if x > 0}


def round_fractional(bg: BipartiteWeighted, frac: FractionalBalancedExpansion,
                     fixed: set[int] | frozenset[int] = frozenset()) -> dict[int, int]:
    """Round a fractional expansion to an integral map b -> a.

    Cycles are cancelled until the support is a forest; each tree is rooted at
    its lowest A vertex. Inside A1 trees every b goes to its parent, inside A2
    trees leaf b's go to their parent and inner b's to their lowest child.
    B vertices in `fixed` are left out.
    """
    f: dict[int, int] = {}
    forest = cycle_cancel_to_forest(bg, frac, skip_b=fixed)
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for (a, b) in forest:
        adj.setdefault(("a", a), []).append(("b", b))
        adj.setdefault(("b", b), []).append(("a", a))
    seen: set = set()
    for a in sorted(bg.a_adj):
        root = ("a", a)
        if root in seen or root not in adj:
            continue
        parent = {root: None}
        order = [root]
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for v in sorted(adj[u]):
                if v not in parent:
                    parent[v] = u
                    order.append(v)
        seen.update(order)
        in_a1 = {x[1] in frac.A1 for x in order if x[0] == "a"}
        assert len(in_a1) == 1, "tree mixes A1 and A2"
        children: dict = {}
        for v, p in parent.items():
            if p is not None:
                children.setdefault(p, []).append(v)
        b_nodes = [x for x in order if x[0] == "b"]
        if a in frac.A1:
            for x in b_nodes:
                f[x[1]] = parent[x][1]
        else:
            for x in b_nodes:
                if x not in children:
                    f[x[1]] = parent[x][1]
            for x in b_nodes:
                if x in children:
                    f[x[1]] = min(c[1] for c in children[x])
    return f


def balanced_expansion(bg: BipartiteWeighted, q: int) -> BalancedExpansion:
    if q < bg.w_max_b:
        raise QBelowMaxWeight(f"q={q} below max B weight {bg.w_max_b}")
    frac = fractional_balanced_expansion(bg, q)
    aw, bw = bg.a_weights, bg.b_weights
    f: dict[int, int] = {}

    # stranded b's (all neighbours heavy) were fixed in preprocessing
    fixed = set()
    for b, nb in bg.b_adj.items():
        if all(aw[a] >= q for a in nb):
            f[b] = nb[0]
            fixed.add(b)
    used = {b: 0 for b in bg.b_adj}
    for (a, b), x in frac.g.items():
        used[b] += x
    for b, nb in bg.b_adj.items():
        if b not in fixed and used[b] == 0:
            f[b] = nb[0]
            fixed.add(b)

    f.update(round_fractional(bg, frac, fixed))
    return BalancedExpansion(frac.A1, frac.A2, f, q)


def check_balanced(bg: BipartiteWeighted, be: BalancedExpansion) -> list[str]:
    """Violations of the balanced expansion conditions (empty means valid)."""
    out = []
    if be.A1 & be.A2 or (be.A1 | be.A2) != set(bg.a_adj):
        out.append("A1/A2 do not partition A")
    wmax = bg.w_max_b
    if set(be.f) != set(bg.b_adj):
        out.append("assignment is not total on B")
    for b, a in be.f.items():
        if a not in bg.b_adj.get(b, ()):
            out.append(f"B vertex {b} assigned to non-neighbour {a}")
    loads = {a: bg.a_weights[a] for a in bg.a_adj}
    for b, a in be.f.items():
        if a in loads:
            loads[a] += bg.b_weights[b]
    for a, load in loads.items():
        if a in be.A1 and load < be.q - wmax + 1:
            out.append(f"A1 vertex {a} load {load} below q-wmax+1")
        if a in be.A2 and load > be.q + wmax - 1:
            out.append(f"A2 vertex {a} load {load} above q+wmax-1")
    for b, a in be.f.items():
        if a in be.A1:
            for x in bg.b_adj[b]:
                if x not in be.A1:
                    out.append(f"B vertex {b} assigned into A1 but adjacent to {x}")
    return out


def weighted_expansion(bg: BipartiteWeighted, q: int) -> WeightedExpansionResult:
    """Plain q-expansion: every kept a receives weight at least q - W + 1."""
    unit = BipartiteWeighted({a: 1 for a in bg.a_adj}, bg.b_weights, bg.edges())
    if q + 1 <= bg.w_max_b - 1:
        f = {b: nb[0] for b, nb in bg.b_adj.items()}
        return WeightedExpansionResult(frozenset(bg.a_adj), frozenset(bg.b_adj), f)
    be = balanced_expansion(unit, q + 1)
    C = frozenset(b for b, a in be.f.items() if a in be.A1)
    return WeightedExpansionResult(be.A1, C, {b: be.f[b] for b in sorted(C)})
