"""Kernels, packing and balanced-partition approximations built on find_bcd."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .engine import BalancedCrownDecomposition, CapHit, Completed, find_bcd, outer_index_cvp
from .errors import Infeasible, InvalidParams
from .expansion import BipartiteWeighted, FractionalBalancedExpansion, round_fractional
from .graph import ConnectedPartition, WeightedGraph, connected_components, induced_weight, line_graph, spanning_tree
from .netflow import CostFlowNetwork, min_cost_flow

REDUCED = "Reduced"
TRIVIALLY_YES = "TriviallyYes"
TRIVIALLY_NO = "TriviallyNo"


@dataclass
class KernelResult:
    """Outcome of a kernelization.

    `vertex_map[i]` is the original id of reduced vertex i. The certificate
    (C, H, f) is given in original ids and is None after an early cut-off; in
    that case `witness` holds the disjoint connected sets that decided it.
    """

    reducedGraph: WeightedGraph
    reducedK: int
    verdict: str
    certificate: tuple[frozenset[int], tuple[int, ...], dict[frozenset[int], int]] | None
    vertex_map: list[int] = field(default_factory=list)
    forced: tuple[int, ...] = ()
    witness: list[frozenset[int]] = field(default_factory=list)
    outer_index: int = 0


@dataclass
class Probe:
    X: int
    accepted: bool
    reason: str = ""
    outer_index: int | None = None
    cost: Fraction | None = None
    body_parts: int | None = None
    budget: int | None = None
    saturated: bool | None = None


@dataclass
class BcpSolution:
    parts: ConnectedPartition
    objective: int
    target: int = 0
    probes: list[Probe] = field(default_factory=list)


@dataclass
class EdgeWeightedGraph:
    n: int
    edges: list[tuple[int, int]]
    weights: list[int]


@dataclass
class BcepSolution:
    parts: list[frozenset[tuple[int, int]]]
    objective: int
    line: BcpSolution | None = None


# -- shared helpers ---------------------------------------------------------

def _heavy_components(g: WeightedGraph, W: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    heavy, light = [], []
    for comp in connected_components(g):
        (heavy if induced_weight(g, comp) >= W else light).append(comp)
    return heavy, light


def _bcd_parts(bcd: BalancedCrownDecomposition) -> list[frozenset[int]]:
    """Body parts plus one set per head holding the head and its crown components."""
    out = [frozenset(p) for p in bcd.R_parts]
    crown: dict[int, set[int]] = {h: {h} for h in bcd.H}
    for q, h in bcd.f.items():
        crown[h] |= q
    out += [frozenset(crown[h]) for h in bcd.H]
    return out


def _outer(res) -> int:
    if isinstance(res, CapHit):
        return res.outer_index
    return len(res.bcd.H) + len(res.bcd.R_parts)


def _lift(sets, old: list[int]) -> list[frozenset[int]]:
    return [frozenset(old[v] for v in s) for s in sets]


def _lifted_certificate(bcd: BalancedCrownDecomposition, old: list[int]):
    C = frozenset(old[v] for v in bcd.C)
    H = tuple(sorted(old[h] for h in bcd.H))
    f = {frozenset(old[v] for v in q): old[h] for q, h in bcd.f.items()}
    return C, H, f


def _witness(res, old: list[int]) -> list[frozenset[int]]:
    if isinstance(res, CapHit):
        return _lift(outer_index_cvp(res.state).parts, old)
    return _lift(_bcd_parts(res.bcd), old)


# -- kernels ----------------------------------------------------------------

def wsep_kernel(g: WeightedGraph, W: int, k: int, check: bool = True) -> KernelResult:
    """Kernel for deleting at most k vertices so that every remaining component weighs < W."""
    if W < 2 or k < 0:
        raise InvalidParams("need W >= 2 and k >= 0")
    forced = tuple(v for v in range(g.n) if g.weights[v] >= W)
    budget = k - len(forced)
    empty = WeightedGraph([])
    if budget < 0:
        return KernelResult(empty, budget, TRIVIALLY_NO, None, [], forced,
                            [frozenset({v}) for v in forced], len(forced))
    rest, old = g.subgraph(set(range(g.n)) - set(forced))
    heavy, _ = _heavy_components(rest, W)
    keep = sorted(old[v] for c in heavy for v in c)
    sub, old = g.subgraph(keep)
    if sub.n == 0:
        return KernelResult(empty, budget, REDUCED, (frozenset(), (), {}), [], forced)
    res = find_bcd(sub, W, outer_cap=budget + 1, check=check)
    outer = _outer(res)
    if outer > budget:
        witness = [frozenset({v}) for v in forced] + _witness(res, old)
        return KernelResult(empty, budget, TRIVIALLY_NO, None, [], forced, witness, outer + len(forced))
    bcd = res.bcd
    C, H, f = _lifted_certificate(bcd, old)
    reduced, rmap = sub.subgraph(bcd.R)
    return KernelResult(reduced, budget - len(H), REDUCED, (C, H, f),
                        [old[v] for v in rmap], forced, [], outer + len(forced))


def wpack_kernel(g: WeightedGraph, W: int, k: int, check: bool = True) -> KernelResult:
    """Kernel for finding k disjoint connected sets of weight at least W."""
    if W < 1 or k < 0:
        raise InvalidParams("need W >= 1 and k >= 0")
    empty = WeightedGraph([])
    if k == 0:
        return KernelResult(empty, 0, TRIVIALLY_YES, None)
    heavy, _ = _heavy_components(g, W)
    sub, old = g.subgraph(v for c in heavy for v in c)
    if sub.n == 0:
        return KernelResult(empty, k, REDUCED, (frozenset(), (), {}), [])
    res = find_bcd(sub, W, outer_cap=k, check=check)
    outer = _outer(res)
    if outer >= k:
        return KernelResult(empty, 0, TRIVIALLY_YES, None, [], (), _witness(res, old), outer)
    bcd = res.bcd
    C, H, f = _lifted_certificate(bcd, old)
    reduced, rmap = sub.subgraph(bcd.R)
    return KernelResult(reduced, k - len(H), REDUCED, (C, H, f), [old[v] for v in rmap], (), [], outer)


def wpack_approx(g: WeightedGraph, W: int, check: bool = True) -> ConnectedPartition:
    """A packing of connected sets of weight >= W, at least a third of the maximum size."""
    if W < 1:
        raise InvalidParams("need W >= 1")
    heavy, _ = _heavy_components(g, W)
    sub, old = g.subgraph(v for c in heavy for v in c)
    if sub.n == 0:
        return ConnectedPartition([], covering=False)
    res = find_bcd(sub, W, check=check)
    return ConnectedPartition(_lift(_bcd_parts(res.bcd), old), covering=False)


# -- exact-k adjustments ----------------------------------------------------

def merge_to_k(g: WeightedGraph, parts: list[frozenset[int]], k: int) -> list[frozenset[int]]:
    """Merge the lowest-index part with its lowest-index adjacent part until k remain."""
    parts = [set(p) for p in parts]
    alive = list(range(len(parts)))
    owner = {v: i for i, p in enumerate(parts) for v in p}
    while len(alive) > k:
        for i in alive:
            nbrs = {owner[u] for v in parts[i] for u in g.adj[v] if owner.get(u, i) != i}
            if nbrs:
                j = min(nbrs)
                for v in parts[j]:
                    owner[v] = i
                parts[i] |= parts[j]
                parts[j] = set()
                alive.remove(j)
                break
        else:
            raise Infeasible("cannot merge down to k parts")
    return [frozenset(parts[i]) for i in alive]


def split_to_k(g: WeightedGraph, parts: list[frozenset[int]], k: int) -> list[frozenset[int]]:
    """Peel spanning-tree leaves off the heaviest splittable part until k parts exist."""
    parts = list(parts)
    while len(parts) < k:
        cands = [i for i, p in enumerate(parts) if len(p) >= 2]
        if not cands:
            raise Infeasible("fewer than k vertices")
        i = max(cands, key=lambda j: (induced_weight(g, parts[j]), -min(parts[j])))
        part = parts[i]
        root = min(part)
        parent = spanning_tree(g, root, part)
        inner = set(parent.values())
        leaf = min(v for v in part if v != root and v not in inner)
        parts[i] = part - {leaf}
        parts.append(frozenset({leaf}))
    return parts


def _check_bcp_input(g: WeightedGraph, k: int) -> None:
    if k < 1:
        raise InvalidParams("k must be positive")
    if g.n < k:
        raise Infeasible(f"{g.n} vertices cannot form {k} parts")
    if len(connected_components(g)) > k:
        raise Infeasible(f"more than {k} connected components")


def _doubling_bisect(lo: int, hi: int, probe: Callable[[int], bool], largest: bool) -> int:
    """Doubling warm-up then bisection over [lo, hi].

    For largest=True accepted values sit at the bottom and the largest one is
    returned; otherwise the smallest accepted value at the top is returned.
    """
    if largest:
        if not probe(lo):
            raise Infeasible(f"lowest target {lo} rejected")
        good, bad = lo, None
        x = 2
        while x < hi:
            if x > good:
                if probe(x):
                    good = x
                else:
                    bad = x
                    break
            x *= 2
        if bad is None:
            if hi == good or probe(hi):
                return hi
            bad = hi
        while bad - good > 1:
            mid = (good + bad) // 2
            if probe(mid):
                good = mid
            else:
                bad = mid
        return good
    if probe(lo):
        return lo
    bad, good = lo, None
    x = 1
    while x <= lo:
        x *= 2
    while x < hi:
        if probe(x):
            good = x
            break
        bad = x
        x *= 2
    if good is None:
        if not probe(hi):
            raise Infeasible(f"highest target {hi} rejected")
        good = hi
    while good - bad > 1:
        mid = (good + bad) // 2
        if probe(mid):
            good = mid
        else:
            bad = mid
    return good


def probes_monotone(probes: list[Probe], largest: bool) -> bool:
    """No accepted probe lies on the wrong side of a rejected one."""
    acc = [p.X for p in probes if p.accepted]
    rej = [p.X for p in probes if not p.accepted]
    if not acc or not rej:
        return True
    return max(acc) < min(rej) if largest else min(acc) > max(rej)


# -- Max-Min ----------------------------------------------------------------

def _maxmin_probe(g: WeightedGraph, k: int, X: int, check: bool) -> tuple[Probe, list[frozenset[int]] | None]:
    lam = -(-X // 3)
    res = find_bcd(g, lam, outer_cap=k, check=check)
    outer = _outer(res)
    if outer < k:
        return Probe(X, False, "outer index below k", outer), None
    if isinstance(res, CapHit):
        parts = list(outer_index_cvp(res.state).parts)
    else:
        parts = _bcd_parts(res.bcd)
    return Probe(X, True, "", outer), merge_to_k(g, parts, k)


def maxmin_bcp(g: WeightedGraph, k: int, check: bool = True) -> BcpSolution:
    """k connected parts covering V whose lightest part weighs at least a third of the best possible."""
    _check_bcp_input(g, k)
    comps = connected_components(g)
    w_min = min(induced_weight(g, c) for c in comps)
    upper = min(-(-g.total_weight() // k), w_min)
    probes: list[Probe] = []
    found: dict[int, list[frozenset[int]]] = {}

    def probe(X: int) -> bool:
        for p in probes:
            if p.X == X:
                return p.accepted
        rec, parts = _maxmin_probe(g, k, X, check)
        probes.append(rec)
        if parts is not None:
            found[X] = parts
        return rec.accepted

    X = _doubling_bisect(1, upper, probe, largest=True)
    parts = found[X]
    objective = min(induced_weight(g, p) for p in parts)
    return BcpSolution(ConnectedPartition(parts), objective, X, probes)


# -- Min-Max ----------------------------------------------------------------

@dataclass
class HLambdaNetwork:
    """Cost-flow network deciding where each crown component goes.

    Nodes: 0 = s, 1 = t, then one node per crown component, one per copy,
    one per head. Costs use the integer form: 1 per unit on head->t and
    lambda+1-w(Q) per unit on copy->t.
    """

    net: CostFlowNetwork
    lam: int
    comps: list[frozenset[int]]
    comp_weight: list[int]
    heads: list[int]
    head_weight: list[int]
    sq: list[int]
    qh: dict[tuple[int, int], int]
    qq: list[int]
    ht: list[int]
    qt: list[int]


def build_h_lambda(g: WeightedGraph, bcd: BalancedCrownDecomposition) -> HLambdaNetwork:
    lam = bcd.lam
    comps = sorted(bcd.f, key=min)
    heads = list(bcd.H)
    nq, nh = len(comps), len(heads)
    q_node = lambda i: 2 + i  # noqa: E731
    c_node = lambda i: 2 + nq + i  # noqa: E731
    h_node = {h: 2 + 2 * nq + j for j, h in enumerate(heads)}
    net = CostFlowNetwork(2 + 2 * nq + nh, 0, 1)
    cw = [induced_weight(g, q) for q in comps]
    hw = [g.weights[h] for h in heads]
    head_set = set(heads)
    sq = [net.add_arc(0, q_node(i), cw[i]) for i in range(nq)]
    qh: dict[tuple[int, int], int] = {}
    for i, q in enumerate(comps):
        nbrs = sorted({u for v in q for u in g.adj[v] if u in head_set})
        for h in nbrs:
            qh[(i, h)] = net.add_arc(q_node(i), h_node[h], cw[i])
    qq = [net.add_arc(q_node(i), c_node(i), cw[i]) for i in range(nq)]
    ht = [net.add_arc(h_node[h], 1, lam - hw[j], 1) for j, h in enumerate(heads)]
    qt = [net.add_arc(c_node(i), 1, cw[i], lam + 1 - cw[i]) for i in range(nq)]
    net.demand = sum(cw)
    return HLambdaNetwork(net, lam, comps, cw, heads, hw, sq, qh, qq, ht, qt)


def h_lambda_cost(hl: HLambdaNetwork, values: list[int]) -> Fraction:
    """Exact rational cost: (w(h) + y)/lambda per head plus y/w(Q) per copy arc."""
    cost = Fraction(0)
    for j, arc in enumerate(hl.ht):
        cost += Fraction(hl.head_weight[j] + values[arc], hl.lam)
    for i, arc in enumerate(hl.qt):
        cost += Fraction(values[arc], hl.comp_weight[i])
    return cost


def _round_h_lambda(g: WeightedGraph, hl: HLambdaNetwork, values: list[int]) -> list[frozenset[int]]:
    """Turn the optimal flow into one part per head plus the crown components routed to their copy."""
    lam = hl.lam
    nq = len(hl.comps)
    yq = [values[a] for a in hl.qq]
    yh = {key: values[a] for key, a in hl.qh.items()}
    # at most one undecided component per head, moving flow between equal-weight pairs
    for h in hl.heads:
        while True:
            und = [i for i in range(nq) if yh.get((i, h), 0) > 0 and yq[i] > 0]
            if len(und) < 2:
                break
            i1, i2 = und[0], und[1]
            assert hl.comp_weight[i1] == hl.comp_weight[i2], "undecided components of different weight"
            x = min(yq[i1], yh[(i2, h)])
            yq[i1] -= x
            yh[(i1, h)] += x
            yh[(i2, h)] -= x
            yq[i2] += x
    gmap: dict[tuple[int, int], int] = {}
    for (i, h), y in yh.items():
        if y > 0:
            gmap[(h, i)] = y
    for i in range(nq):
        if yq[i] > 0:
            holders = [h for h in hl.heads if yh.get((i, h), 0) > 0]
            if holders:
                gmap[(min(holders), i)] += yq[i]
    routed = sorted({i for (_, i) in gmap})
    for i in routed:
        assert sum(y for (h, j), y in gmap.items() if j == i) == hl.comp_weight[i]
    bg = BipartiteWeighted({h: g.weights[h] for h in hl.heads},
                           {i: hl.comp_weight[i] for i in routed}, list(gmap))
    frac = FractionalBalancedExpansion(frozenset(), frozenset(hl.heads), gmap, 2 * lam - 1)
    for h in hl.heads:
        assert frac.load(bg, h) <= max(2 * lam - 1, g.weights[h]), "head load above 2X-1"
    f = round_fractional(bg, frac)
    crown: dict[int, set[int]] = {h: {h} for h in hl.heads}
    for i, h in f.items():
        crown[h] |= hl.comps[i]
    out = [frozenset(crown[h]) for h in hl.heads]
    out += [hl.comps[i] for i in range(nq) if i not in set(routed)]
    return out


def _minmax_probe(g: WeightedGraph, k: int, X: int, check: bool) -> tuple[Probe, list[frozenset[int]] | None]:
    heavy, light = _heavy_components(g, X)
    budget = k - len(light)
    if budget < 0:
        return Probe(X, False, "too many light components", budget=budget), None
    sub, old = g.subgraph(v for c in heavy for v in c)
    if sub.n == 0:
        return Probe(X, True, "", 0, Fraction(0), 0, budget, True), list(light)
    res = find_bcd(sub, X, outer_cap=budget + 1, check=check)
    outer = _outer(res)
    if outer > budget:
        return Probe(X, False, "outer index above k", outer, budget=budget), None
    bcd = res.bcd
    hl = build_h_lambda(sub, bcd)
    flow = min_cost_flow(hl.net, check=check)
    saturated = all(flow[a] == hl.net.caps[a] for a in hl.ht)
    assert saturated, "a head arc is not saturated by the min-cost flow"
    cost = h_lambda_cost(hl, flow.values)
    nbody = len(bcd.R_parts)
    if cost + nbody > budget:
        return Probe(X, False, "flow cost above budget", outer, cost, nbody, budget, saturated), None
    parts = _lift(_round_h_lambda(sub, hl, flow.values), old)
    parts += _lift(bcd.R_parts, old)
    parts += list(light)
    assert len(parts) <= k
    return Probe(X, True, "", outer, cost, nbody, budget, saturated), parts


def minmax_bcp(g: WeightedGraph, k: int, check: bool = True) -> BcpSolution:
    """k connected parts covering V whose heaviest part weighs at most three times the best possible."""
    _check_bcp_input(g, k)
    total = g.total_weight()
    lower = max(-(-total // k), max(g.weights))
    probes: list[Probe] = []
    found: dict[int, list[frozenset[int]]] = {}

    def probe(X: int) -> bool:
        for p in probes:
            if p.X == X:
                return p.accepted
        rec, parts = _minmax_probe(g, k, X, check)
        probes.append(rec)
        if parts is not None:
            found[X] = parts
        return rec.accepted

    X = _doubling_bisect(lower, total, probe, largest=False)
    parts = split_to_k(g, found[X], k)
    objective = max(induced_weight(g, p) for p in parts)
    return BcpSolution(ConnectedPartition(parts), objective, X, probes)


# -- edge partition ---------------------------------------------------------

def maxmin_bcep(eg: EdgeWeightedGraph, k: int, check: bool = True) -> BcepSolution:
    """Split the edges into k connected groups, maximising the lightest group, via the line graph."""
    lg = line_graph(eg.n, eg.edges, eg.weights)
    sol = maxmin_bcp(lg, k, check=check)
    parts = [frozenset(tuple(eg.edges[i]) for i in p) for p in sol.parts]
    return BcepSolution(parts, sol.objective, sol)
