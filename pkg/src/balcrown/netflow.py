"""Integral max-flow (Dinic) and min-cost flow (successive shortest paths)."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .errors import InfeasibleDemand, InvalidArc


@dataclass
class FlowNetwork:
    n: int
    source: int
    sink: int
    tails: list[int] = field(default_factory=list)
    heads: list[int] = field(default_factory=list)
    caps: list[int] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, cap: int) -> int:
        if cap < 0:
            raise ValueError("negative capacity")
        self.tails.append(tail)
        self.heads.append(head)
        self.caps.append(cap)
        return len(self.caps) - 1

    @property
    def num_arcs(self) -> int:
        return len(self.caps)


@dataclass
class CostFlowNetwork(FlowNetwork):
    costs: list[int] = field(default_factory=list)
    demand: int = 0

    def add_arc(self, tail: int, head: int, cap: int, cost: int = 0) -> int:  # type: ignore[override]
        if cost < 0:
            raise ValueError("negative cost")
        self.costs.append(cost)
        return super().add_arc(tail, head, cap)


@dataclass
class Flow:
    values: list[int]
    value: int

    def __getitem__(self, arc: int) -> int:
        return self.values[arc]


def _out_lists(net: FlowNetwork) -> list[list[int]]:
    # residual edge 2i is arc i forward, 2i+1 its reverse
    out: list[list[int]] = [[] for _ in range(net.n)]
    for i in range(net.num_arcs):
        out[net.tails[i]].append(2 * i)
        out[net.heads[i]].append(2 * i + 1)
    return out


def max_flow(net: FlowNetwork) -> Flow:
    """Dinic's algorithm; arcs are scanned in insertion order."""
    m = net.num_arcs
    to = [0] * (2 * m)
    res = [0] * (2 * m)
    for i in range(m):
        to[2 * i] = net.heads[i]
        to[2 * i + 1] = net.tails[i]
        res[2 * i] = net.caps[i]
    out = _out_lists(net)
    s, t = net.source, net.sink
    total = 0
    if s == t:
        return Flow([0] * m, 0)
    while True:
        level = [-1] * net.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in out[u]:
                if res[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    q.append(to[e])
        if level[t] < 0:
            break
        ptr = [0] * net.n
        # iterative blocking flow
        while True:
            path: list[int] = []
            u = s
            while u != t:
                lst = out[u]
                advanced = False
                while ptr[u] < len(lst):
                    e = lst[ptr[u]]
                    v = to[e]
                    if res[e] > 0 and level[v] == level[u] + 1:
                        path.append(e)
                        u = v
                        advanced = True
                        break
                    ptr[u] += 1
                if not advanced:
                    if u == s:
                        break
                    level[u] = -1  # dead end
                    e = path.pop()
                    u = to[e ^ 1]
                    ptr[u] += 1
            if u != t:
                break
            push = min(res[e] for e in path)
            for e in path:
                res[e] -= push
                res[e ^ 1] += push
            total += push
    values = [res[2 * i + 1] for i in range(m)]
    return Flow(values, total)


def flow_value(net: FlowNetwork, values: list[int]) -> int:
    val = 0
    for i in range(net.num_arcs):
        if net.heads[i] == net.sink:
            val += values[i]
        if net.tails[i] == net.sink:
            val -= values[i]
    return val


def residual_reachable(net: FlowNetwork, f: Flow, start: int, extra_arc: int | None = None) -> set[int]:
    """Nodes reachable from `start` through arcs with positive residual capacity."""
    fwd: list[list[int]] = [[] for _ in range(net.n)]
    for i in range(net.num_arcs):
        cap = net.caps[i] + (1 if i == extra_arc else 0)
        if f.values[i] < cap:
            fwd[net.tails[i]].append(net.heads[i])
        if f.values[i] > 0:
            fwd[net.heads[i]].append(net.tails[i])
    seen = {start}
    q = deque([start])
    while q:
        u = q.popleft()
        for v in fwd[u]:
            if v not in seen:
                seen.add(v)
                q.append(v)
    return seen


def reaches_sink(net: FlowNetwork, f: Flow) -> set[int]:
    """Nodes from which the sink is reachable in the residual graph."""
    back: list[list[int]] = [[] for _ in range(net.n)]
    for i in range(net.num_arcs):
        if f.values[i] < net.caps[i]:
            back[net.heads[i]].append(net.tails[i])
        if f.values[i] > 0:
            back[net.tails[i]].append(net.heads[i])
    seen = {net.sink}
    q = deque([net.sink])
    while q:
        u = q.popleft()
        for v in back[u]:
            if v not in seen:
                seen.add(v)
                q.append(v)
    return seen


def augmenting_step(net: FlowNetwork, f: Flow, arc: int) -> bool:
    """Would one extra unit of capacity on `arc` let the (maximum) flow f grow by one?"""
    if not (0 <= arc < net.num_arcs):
        raise InvalidArc(f"unknown arc id {arc}")
    return net.sink in residual_reachable(net, f, net.source, extra_arc=arc)


def has_negative_cycle(n: int, arcs: list[tuple[int, int, int]]) -> bool:
    """Bellman-Ford from a virtual source joined to every node at cost 0."""
    dist = [0] * n
    for _ in range(n):
        changed = False
        for u, v, c in arcs:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            return False
    return True


def residual_cost_arcs(net: CostFlowNetwork, f: Flow) -> list[tuple[int, int, int]]:
    arcs = []
    for i in range(net.num_arcs):
        if f.values[i] < net.caps[i]:
            arcs.append((net.tails[i], net.heads[i], net.costs[i]))
        if f.values[i] > 0:
            arcs.append((net.heads[i], net.tails[i], -net.costs[i]))
    return arcs


def flow_cost(net: CostFlowNetwork, f: Flow) -> int:
    return sum(c * x for c, x in zip(net.costs, f.values))


def min_cost_flow(net: CostFlowNetwork, check: bool = True) -> Flow:
    """Cheapest integral flow of value exactly `net.demand`.

    Successive shortest paths with Johnson potentials; Dijkstra breaks
    distance ties by the lower node id.
    """
    m = net.num_arcs
    to = [0] * (2 * m)
    res = [0] * (2 * m)
    cost = [0] * (2 * m)
    for i in range(m):
        to[2 * i], to[2 * i + 1] = net.heads[i], net.tails[i]
        res[2 * i] = net.caps[i]
        cost[2 * i], cost[2 * i + 1] = net.costs[i], -net.costs[i]
    out = _out_lists(net)
    n, s, t = net.n, net.source, net.sink
    pot = [0] * n
    need = net.demand
    sent = 0
    inf = float("inf")
    while sent < need:
        dist = [inf] * n
        via = [-1] * n
        dist[s] = 0
        heap = [(0, s)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in out[u]:
                if res[e] <= 0:
                    continue
                v = to[e]
                nd = d + cost[e] + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    via[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[t] == inf:
            raise InfeasibleDemand(f"only {sent} of {need} units can be routed")
        top = max(d for d in dist if d != inf)
        for v in range(n):
            pot[v] += dist[v] if dist[v] != inf else top
        push = need - sent
        v = t
        while v != s:
            e = via[v]
            push = min(push, res[e])
            v = to[e ^ 1]
        v = t
        while v != s:
            e = via[v]
            res[e] -= push
            res[e ^ 1] += push
            v = to[e ^ 1]
        sent += push
    flow = Flow([res[2 * i + 1] for i in range(m)], sent)
    if check:
        assert not has_negative_cycle(n, residual_cost_arcs(net, flow)), "residual graph has a negative cycle"
    return flow
