"""Balanced crown decomposition search.

The search keeps a working decomposition of the graph that remains after
heavy vertices and their light crowns are set aside:

* ``sub``    -- crown sub-components (connected, each inside a light component of the crown),
* ``heads``  -- current head vertices,
* ``parts``  -- body parts, each connected with weight at least lambda,
* ``assign`` -- sub-component -> head it is charged to,
* ``reserve``-- head -> one extra neighbouring sub-component held in reserve.

Each round either splits a body part (Divide) or turns one of its vertices into
a head (Cut), then runs an expansion to retire heads that already carry enough
crown weight, re-charges private crown pieces, and merges loose fragments.
The outer index |H*| + |H| + |parts| never decreases.

Throughout, the load of a head counts the head itself plus everything charged to it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import LambdaNonPositive, NotFullyBalanced, SmallComponent
from .expansion import BipartiteWeighted, balanced_expansion
from .graph import ConnectedPartition, WeightedGraph, connected_components, induced_weight
from .partition import CutVertex, cvp_violations, divide_or_cut


@dataclass
class BalancedCrownDecomposition:
    C: frozenset[int]
    H: tuple[int, ...]
    R: frozenset[int]
    R_parts: list[frozenset[int]]
    f: dict[frozenset[int], int]
    lam: int

    def head_load(self, g: WeightedGraph, h: int) -> int:
        return g.weights[h] + sum(induced_weight(g, q) for q, x in self.f.items() if x == h)


@dataclass
class TraceRecord:
    step: str
    outer: int
    inner: int
    heads: int
    parts: int
    crown: int

    def as_dict(self) -> dict:
        return {"step": self.step, "outer": self.outer, "inner": self.inner,
                "H": self.heads, "R": self.parts, "C": self.crown}


@dataclass
class Completed:
    bcd: BalancedCrownDecomposition
    trace: list[TraceRecord] = field(default_factory=list)
    divide_cut_steps: int = 0


@dataclass
class CapHit:
    state: "PBState"
    trace: list[TraceRecord] = field(default_factory=list)
    divide_cut_steps: int = 0

    @property
    def outer_index(self) -> int:
        return self.state.outer_index()


class InvariantBroken(AssertionError):
    pass


class PBState:
    """Mutable working state of one search run."""

    def __init__(self, g: WeightedGraph, lam: int):
        self.g = g
        self.lam = lam
        self.alive: set[int] = set(range(g.n))
        self.sub: dict[int, frozenset[int]] = {}
        self.sub_w: dict[int, int] = {}
        self.sc_of: dict[int, int] = {}
        self.heads: set[int] = set()
        self.parts: dict[int, frozenset[int]] = {}
        self.part_of: dict[int, int] = {}
        self.assign: dict[int, int] = {}
        self.charged: dict[int, set[int]] = {}
        self.reserve: dict[int, int | None] = {}
        self.hstar: list[int] = []
        self.cstar: set[int] = set()
        self.fstar: list[tuple[frozenset[int], int]] = []
        self._next_sc = 0
        self._next_part = 0
        self.trace: list[TraceRecord] = []
        self.divide_cut_steps = 0

    # -- bookkeeping ------------------------------------------------------
    def w(self, vs) -> int:
        ws = self.g.weights
        return sum(ws[v] for v in vs)

    def add_sub(self, vs, head: int | None = None) -> int:
        c = self._next_sc
        self._next_sc += 1
        vs = frozenset(vs)
        self.sub[c] = vs
        self.sub_w[c] = self.w(vs)
        for v in vs:
            self.sc_of[v] = c
        if head is not None:
            self.set_assign(c, head)
        return c

    def drop_sub(self, c: int) -> frozenset[int]:
        self.unassign(c)
        vs = self.sub.pop(c)
        del self.sub_w[c]
        for v in vs:
            del self.sc_of[v]
        return vs

    def add_part(self, vs) -> int:
        r = self._next_part
        self._next_part += 1
        vs = frozenset(vs)
        self.parts[r] = vs
        for v in vs:
            self.part_of[v] = r
        return r

    def drop_part(self, r: int) -> frozenset[int]:
        vs = self.parts.pop(r)
        for v in vs:
            del self.part_of[v]
        return vs

    def set_assign(self, c: int, h: int) -> None:
        self.unassign(c)
        self.assign[c] = h
        self.charged.setdefault(h, set()).add(c)

    def unassign(self, c: int) -> None:
        h = self.assign.pop(c, None)
        if h is not None:
            self.charged[h].discard(c)

    def add_head(self, h: int) -> None:
        self.heads.add(h)
        self.charged.setdefault(h, set())
        self.reserve.setdefault(h, None)

    def clear_heads(self) -> None:
        self.heads.clear()
        self.assign.clear()
        self.charged.clear()
        self.reserve.clear()

    def load(self, h: int) -> int:
        """Head weight plus the weight of everything charged to it."""
        return self.g.weights[h] + sum(self.sub_w[c] for c in self.charged.get(h, ()))

    def head_set(self, h: int) -> frozenset[int]:
        out = {h}
        for c in self.charged.get(h, ()):
            out |= self.sub[c]
        return frozenset(out)

    def outer_index(self) -> int:
        return len(self.hstar) + len(self.heads) + len(self.parts)

    def inner_index(self) -> int:
        return len(self.hstar) + len(self.heads)

    def record(self, step: str) -> None:
        self.trace.append(TraceRecord(step, self.outer_index(), self.inner_index(),
                                      len(self.heads), len(self.parts), len(self.sub)))

    # -- neighbourhood queries -------------------------------------------
    def sub_neighbors(self, vs) -> set[int]:
        """Sub-components adjacent to (or meeting) the vertex set."""
        out = set()
        sc_of = self.sc_of
        for v in vs:
            for u in self.g.adj[v]:
                c = sc_of.get(u)
                if c is not None:
                    out.add(c)
        return out

    def free_neighbors(self, vs) -> list[int]:
        return sorted(c for c in self.sub_neighbors(vs) if c not in self.assign)

    def effective_set(self, r: int) -> frozenset[int]:
        out = set(self.parts[r])
        for c in self.free_neighbors(self.parts[r]):
            out |= self.sub[c]
        return frozenset(out)

    def effective_weight(self, r: int) -> int:
        part = self.parts[r]
        return self.w(part) + sum(self.sub_w[c] for c in self.free_neighbors(part))

    def crown_components(self) -> list[tuple[frozenset[int], list[int], bool]]:
        """Components of the crown as (vertices, sub-component ids, private flag)."""
        out = []
        seen: set[int] = set()
        adj, sc_of, part_of = self.g.adj, self.sc_of, self.part_of
        for c in list(self.sub):
            if c in seen:
                continue
            seen.add(c)
            ids = [c]
            stack = [c]
            private = True
            while stack:
                x = stack.pop()
                for v in self.sub[x]:
                    for u in adj[v]:
                        y = sc_of.get(u)
                        if y is not None:
                            if y not in seen:
                                seen.add(y)
                                ids.append(y)
                                stack.append(y)
                        elif u in part_of:
                            private = False
            ids.sort()
            verts = frozenset().union(*(self.sub[x] for x in ids))
            out.append((verts, ids, private))
        out.sort(key=lambda t: min(t[0]))
        return out


# -- steps ------------------------------------------------------------------

def remove_heavy(state: PBState) -> None:
    """Set aside vertices of weight >= lambda and the light pieces hanging off them."""
    g, lam = state.g, state.lam
    heavy = sorted(v for v in range(g.n) if g.weights[v] >= lam)
    if not heavy:
        return
    hs = set(heavy)
    state.hstar.extend(heavy)
    rest = set(range(g.n)) - hs
    for comp in connected_components(g, rest):
        if state.w(comp) < lam:
            target = min(u for v in comp for u in g.adj[v] if u in hs)
            state.fstar.append((comp, target))
            state.cstar |= comp
    state.alive -= hs
    state.alive -= state.cstar


def initialise(state: PBState) -> None:
    for comp in connected_components(state.g, state.alive):
        state.add_part(comp)


def divide_step(state: PBState, r: int, side1: frozenset[int], side2: frozenset[int]) -> None:
    for c in state.free_neighbors(state.parts[r]):
        state.drop_sub(c)
    state.drop_part(r)
    state.add_part(side1)
    state.add_part(side2)
    for h in sorted(state.heads):
        members = sorted(state.charged.get(h, ()))
        vs = {h}
        for c in members:
            vs |= state.drop_sub(c)
        state.add_part(vs)
    state.clear_heads()


def cut_step(state: PBState, r: int, hc: int) -> None:
    lam = state.lam
    part = state.parts[r]
    assert hc in part, "cut vertex outside the chosen part"
    free = state.free_neighbors(part)
    eff = set(part)
    for c in free:
        eff |= state.sub[c]
    eff.discard(hc)
    pieces = connected_components(state.g, eff)
    pieces.sort(key=lambda p: (-state.w(p), min(p)))
    acc = state.g.weights[hc]
    i = None
    for j, p in enumerate(pieces):
        acc += state.w(p)
        if acc >= 3 * lam - 2:
            i = j
            break
    assert i is not None, "effective weight below 3(lambda-1)"

    # reserves pointing into the dissolved free neighbourhood follow their vertices
    moved_reserve = {h: c for h, c in state.reserve.items() if c is not None and c in free}
    probe = {h: next(iter(state.sub[c])) for h, c in moved_reserve.items()}
    for c in free:
        state.drop_sub(c)
    state.drop_part(r)
    state.add_head(hc)
    new_ids = []
    for j, p in enumerate(pieces):
        new_ids.append(state.add_sub(p, head=hc if j < i else None))
    for h, v in probe.items():
        state.reserve[h] = state.sc_of[v]
    state.reserve[hc] = new_ids[i]

    big = [comp for comp, _, _ in state.crown_components() if state.w(comp) >= lam]
    if big:
        cut_cleanup(state, min(big, key=min))


def cut_cleanup(state: PBState, qhat: frozenset[int]) -> None:
    lam = state.lam
    ids = sorted({state.sc_of[v] for v in qhat})
    idset = set(ids)
    # spanning tree over the sub-components of qhat
    nbrs = {c: sorted(x for x in state.sub_neighbors(state.sub[c]) if x in idset and x != c) for c in ids}
    tree: dict[int, set[int]] = {c: set() for c in ids}
    seen = {ids[0]}
    dq = deque([ids[0]])
    while dq:
        x = dq.popleft()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                tree[x].add(y)
                tree[y].add(x)
                dq.append(y)
    total = sum(state.sub_w[c] for c in ids)
    pruned = True
    while pruned:
        pruned = False
        for c in sorted(tree):
            if len(tree) > 1 and len(tree[c]) == 1 and total - state.sub_w[c] >= lam:
                (other,) = tree.pop(c)
                tree[other].discard(c)
                total -= state.sub_w[c]
                pruned = True
                break
    kept = sorted(tree)
    qprime = set()
    for c in kept:
        qprime |= state.drop_sub(c)
    for h, c in list(state.reserve.items()):
        if c is not None and c not in state.sub:
            state.reserve[h] = None
    state.add_part(qprime)

    heads = sorted(state.heads)
    deficient = [h for h in heads if state.load(h) < lam]
    if len(deficient) > 1:
        raise InvariantBroken("more than one deficient head after cleanup")
    groups: dict[int, set[int]] = {h: set(state.charged.get(h, ())) for h in heads}
    if deficient:
        hd = deficient[0]
        spare = state.reserve.get(hd)
        if spare is None:
            raise InvariantBroken("deficient head has no reserve")
        for h in heads:
            groups[h].discard(spare)
        groups[hd].add(spare)
    used = set()
    new_parts = []
    for h in heads:
        vs = {h}
        for c in sorted(groups[h]):
            vs |= state.sub[c]
            used.add(c)
        new_parts.append(vs)
    leftover_vs: set[int] = set()
    for c in list(state.sub):
        if c not in used:
            leftover_vs |= state.sub[c]
    for c in list(state.sub):
        state.drop_sub(c)
    state.clear_heads()
    for vs in new_parts:
        state.add_part(vs)
    for comp in connected_components(state.g, leftover_vs):
        if state.w(comp) >= lam:
            state.add_part(comp)
        else:
            state.add_sub(comp)


def expansion_step(state: PBState) -> dict[frozenset[int], int]:
    """Retire heads that an expansion over the private crown components makes heavy enough.

    Returns the assignment of the remaining private components to remaining heads.
    """
    lam = state.lam
    comps = [(vs, ids) for vs, ids, private in state.crown_components() if private]
    if not state.heads or not comps:
        return {}
    heads = sorted(state.heads)
    b_weights = {i: state.w(vs) for i, (vs, _) in enumerate(comps)}
    edges = []
    head_set = state.heads
    for i, (vs, _) in enumerate(comps):
        touched = {u for v in vs for u in state.g.adj[v] if u in head_set}
        edges.extend((h, i) for h in touched)
    bg = BipartiteWeighted({h: state.g.weights[h] for h in heads}, b_weights, edges)
    be = balanced_expansion(bg, 2 * lam - 1)
    retired = sorted(be.A1)
    for h in retired:
        for c in list(state.charged.get(h, ())):
            state.unassign(c)
        state.heads.discard(h)
        state.charged.pop(h, None)
        state.reserve.pop(h, None)
        state.hstar.append(h)
        state.alive.discard(h)
    rest: dict[frozenset[int], int] = {}
    for i, (vs, ids) in enumerate(comps):
        h = be.f[i]
        if h in be.A1:
            for c in ids:
                state.drop_sub(c)
            state.fstar.append((vs, h))
            state.cstar |= vs
            state.alive -= vs
        else:
            rest[vs] = h
    for h, c in list(state.reserve.items()):
        if c is not None and c not in state.sub:
            raise InvariantBroken("reserve pointed into a retired crown component")
    return rest


def assign_priv(state: PBState, f: dict[frozenset[int], int]) -> dict:
    """Charge every private sub-component according to f, then repair deficits from the old charges.

    Returns the context needed by the following two sub-phases.
    """
    lam = state.lam
    old_assign = dict(state.assign)
    old_reserve = dict(state.reserve)
    private_ids = set()
    for vs, h in f.items():
        private_ids |= {state.sc_of[v] for v in vs}
    for c in list(state.assign):
        state.unassign(c)
    for vs, h in sorted(f.items(), key=lambda t: min(t[0])):
        for c in sorted({state.sc_of[v] for v in vs}):
            state.set_assign(c, h)

    # trees over heads and private sub-components
    children: dict = {}
    parent: dict = {}
    for h in sorted(state.heads):
        members = state.charged.get(h, set())
        root = ("h", h)
        children[root] = []
        seen = {h}
        frontier = [root]
        reached = set()
        while frontier:
            nxt = []
            for node in frontier:
                vs = {node[1]} if node[0] == "h" else state.sub[node[1]]
                for c in sorted(state.sub_neighbors(vs)):
                    if c in members and c not in reached:
                        reached.add(c)
                        child = ("c", c)
                        children[node].append(child)
                        children[child] = []
                        parent[child] = node
                        nxt.append(child)
            frontier = nxt
        del seen
        if reached != members:
            raise InvariantBroken(f"head {h} charge is not connected")

    def subtree(node) -> list:
        out = [node]
        i = 0
        while i < len(out):
            out.extend(children[out[i]])
            i += 1
        return out

    moves = 0
    while True:
        target = None
        for h in sorted(state.heads):
            if state.load(h) >= 2 * lam - 1:
                continue
            missing = sorted(c for c, x in old_assign.items()
                             if x == h and c in private_ids and state.assign.get(c) != h)
            if missing:
                target = (h, missing[0])
                break
        if target is None:
            break
        h, ct = target
        node = ("c", ct)
        p = parent[node]
        children[p].remove(node)
        parent[node] = ("h", h)
        children[("h", h)].append(node)
        for x in subtree(node):
            state.set_assign(x[1], h)
        moves += 1
        if moves > len(private_ids) + 1:
            raise InvariantBroken("private reassignment does not terminate")
    return {"old_assign": old_assign, "old_reserve": old_reserve, "private_ids": private_ids,
            "children": children, "subtree": subtree}


def merge_subcomp(state: PBState, ctx: dict) -> dict[int, int]:
    """Collapse each head's child subtree into one sub-component; returns old id -> new id."""
    children, subtree = ctx["children"], ctx["subtree"]
    mapping: dict[int, int] = {}
    for h in sorted(state.heads):
        for child in list(children[("h", h)]):
            group = [x[1] for x in subtree(child)]
            vs = set()
            for c in group:
                vs |= state.drop_sub(c)
            new = state.add_sub(vs, head=h)
            for c in group:
                mapping[c] = new
    for c in state.sub:
        mapping.setdefault(c, c)
    return mapping


def fill_deficit(state: PBState, ctx: dict, mapping: dict[int, int]) -> None:
    lam = state.lam
    old_assign, old_reserve, private_ids = ctx["old_assign"], ctx["old_reserve"], ctx["private_ids"]
    for h in sorted(state.heads):
        if state.load(h) >= 2 * lam - 1:
            state.reserve[h] = None
            continue
        cands = [c for c, x in old_assign.items() if x == h and c not in private_ids and c in state.sub]
        cands.sort(key=lambda c: (-state.sub_w[c], c))
        i = 0
        while i < len(cands) and state.load(h) + state.sub_w[cands[i]] <= 3 * lam - 3:
            state.set_assign(cands[i], h)
            i += 1
        if i < len(cands):
            state.reserve[h] = cands[i]
        else:
            old = old_reserve.get(h)
            state.reserve[h] = mapping.get(old) if old is not None else None


def merge_unassigned(state: PBState) -> None:
    lam = state.lam
    guard = 0
    while True:
        comps = state.crown_components()
        whole = {ids[0] for _, ids, _ in comps if len(ids) == 1}
        loose = [c for c in state.sub if c not in state.assign and c not in whole]
        if not loose:
            return
        c = min(loose)
        c2 = min(x for x in state.sub_neighbors(state.sub[c]) if x != c)
        h = state.assign.get(c2)
        vs = state.drop_sub(c) | state.drop_sub(c2)
        new = state.add_sub(vs, head=h)
        for x, r in list(state.reserve.items()):
            if r in (c, c2):
                state.reserve[x] = new
        if h is not None and state.load(h) >= 3 * lam - 2:
            crown_of = _crown_map(state)
            nonpriv = [x for x in state.charged[h] if not crown_of[x]]
            nonpriv.sort(key=lambda x: (state.sub_w[x], x))
            last = None
            for x in nonpriv:
                if state.load(h) <= 3 * lam - 3:
                    break
                state.unassign(x)
                last = x
            state.reserve[h] = last
        guard += 1
        if guard > 4 * state.g.n + 4:
            raise InvariantBroken("merging does not terminate")


def _crown_map(state: PBState) -> dict[int, bool]:
    """sub-component id -> whether its crown component is private."""
    out = {}
    for _, ids, private in state.crown_components():
        for c in ids:
            out[c] = private
    return out


def is_fully_balanced(state: PBState) -> bool:
    limit = 3 * (state.lam - 1)
    return all(state.effective_weight(r) <= limit for r in state.parts)


def finalize(state: PBState) -> BalancedCrownDecomposition:
    limit = 3 * (state.lam - 1)
    taken: set[int] = set()
    out_parts = []
    for r in sorted(state.parts):
        eff = state.effective_set(r)
        if state.w(eff) > limit:
            raise NotFullyBalanced(f"part {r} has effective weight {state.w(eff)}")
        piece = eff - taken
        taken |= piece
        out_parts.append(frozenset(piece))
    for h in sorted(state.heads):
        out_parts.append(state.head_set(h))
    H = tuple(sorted(state.hstar))
    C = frozenset(state.cstar)
    R = frozenset(set(range(state.g.n)) - C - set(H))
    f = {vs: h for vs, h in state.fstar}
    return BalancedCrownDecomposition(C, H, R, out_parts, f, state.lam)


def outer_index_cvp(state: PBState) -> ConnectedPartition:
    """A [lambda, inf) partition of V with exactly outer-index many parts."""
    g = state.g
    parts: list[set[int]] = []
    for h in sorted(state.heads):
        parts.append(set(state.head_set(h)))
    for r in sorted(state.parts):
        parts.append(set(state.parts[r]))
    crown_by_head: dict[int, set[int]] = {}
    for vs, h in state.fstar:
        crown_by_head.setdefault(h, set()).update(vs)
    for h in state.hstar:
        parts.append({h} | crown_by_head.get(h, set()))
    owner: dict[int, int] = {}
    for i, p in enumerate(parts):
        for v in p:
            owner[v] = i
    dq = deque(v for p in parts for v in sorted(p))
    while dq:
        v = dq.popleft()
        for u in g.adj[v]:
            if u not in owner:
                owner[u] = owner[v]
                parts[owner[v]].add(u)
                dq.append(u)
    return ConnectedPartition([frozenset(p) for p in parts], covering=True)


# -- validation -------------------------------------------------------------

def state_violations(state: PBState) -> list[str]:
    """Every working-state invariant, checked from scratch."""
    g, lam = state.g, state.lam
    out = []
    seen: set[int] = set()
    for c, vs in state.sub.items():
        if seen & vs:
            out.append(f"sub-component {c} overlaps another")
        seen |= vs
        if len(connected_components(g, vs)) != 1:
            out.append(f"sub-component {c} is disconnected")
    comps = state.crown_components()
    private_of = {}
    for vs, ids, private in comps:
        if state.w(vs) >= lam:
            out.append(f"crown component of weight {state.w(vs)} >= lambda")
        for c in ids:
            private_of[c] = private
    for c, h in state.assign.items():
        if h not in state.heads:
            out.append(f"sub-component {c} charged to non-head {h}")
        elif not any(h in g.adj[v] for v in state.sub[c]):
            out.append(f"sub-component {c} not adjacent to its head {h}")
    body = state.alive - state.heads - set(state.sc_of)
    out += ["body: " + m for m in cvp_violations(g, list(state.parts.values()), lam, None, body)]
    for h in state.heads:
        load = state.load(h)
        if not (2 * lam - 1 <= load <= 3 * lam - 3):
            out.append(f"head {h} load {load} outside [2l-1, 3l-3]")
        spare = state.reserve.get(h)
        if spare is not None:
            if spare not in state.sub:
                out.append(f"head {h} reserve {spare} is gone")
                continue
            if state.assign.get(spare) == h or not any(h in g.adj[v] for v in state.sub[spare]):
                out.append(f"head {h} reserve {spare} not a free neighbour")
        members = state.charged.get(h, set())
        if any(not private_of.get(c, True) for c in members):
            extra = state.sub_w[spare] if spare is not None and spare in state.sub else 0
            if load + extra < 3 * lam - 2:
                out.append(f"head {h} load plus reserve below 3l-2")
        if 2 * load < 5 * (lam - 1):
            for c in members:
                if not private_of.get(c, True) and 2 * state.sub_w[c] < lam - 1:
                    out.append(f"head {h} carries small non-private piece {c}")
    out += crown_violations(g, state.cstar, state.hstar, state.fstar, lam, state.alive)
    return out


def crown_violations(g: WeightedGraph, C, H, fpairs, lam: int, rest=None) -> list[str]:
    out = []
    hs = set(H)
    cs = set(C)
    for v in cs:
        for u in g.adj[v]:
            if u not in cs and u not in hs:
                out.append(f"crown vertex {v} touches non-head {u}")
                break
    load = {h: g.weights[h] for h in hs}
    covered = set()
    for vs, h in fpairs:
        covered |= vs
        if induced_weight(g, vs) >= lam:
            out.append(f"crown component {min(vs)} weighs >= lambda")
        if not any(h in g.adj[v] for v in vs):
            out.append(f"crown component {min(vs)} not adjacent to {h}")
        if h in load:
            load[h] += induced_weight(g, vs)
    if covered != cs:
        out.append("assignment does not cover the crown")
    for h, x in load.items():
        if x < lam:
            out.append(f"head {h} under lambda ({x})")
    return out


def validate_bcd(g: WeightedGraph, bcd: BalancedCrownDecomposition) -> list[str]:
    lam = bcd.lam
    out = []
    C, H, R = set(bcd.C), set(bcd.H), set(bcd.R)
    if C & H or C & R or H & R or (C | H | R) != set(range(g.n)):
        out.append("C, H, R do not partition V")
    for v in C:
        for u in g.adj[v]:
            if u in R:
                out.append(f"C-R edge ({v},{u})")
    comps = connected_components(g, C)
    fkeys = {frozenset(k) for k in bcd.f}
    for q in comps:
        if induced_weight(g, q) >= lam:
            out.append(f"crown component {sorted(q)} weighs >= lambda")
        if q not in fkeys:
            out.append(f"crown component {sorted(q)} has no head")
    load = {h: g.weights[h] for h in H}
    for q, h in bcd.f.items():
        if h not in H:
            out.append(f"crown component mapped to non-head {h}")
            continue
        if not any(h in g.adj[v] for v in q):
            out.append(f"crown component {sorted(q)} not adjacent to head {h}")
        load[h] += induced_weight(g, q)
    for h, x in sorted(load.items()):
        if x < lam:
            out.append(f"head {h} under lambda ({x})")
    out += cvp_violations(g, bcd.R_parts, lam, 3 * lam - 3, R)
    k = len(H) + len(bcd.R_parts)
    if k > min(g.total_weight() // lam, g.n):
        out.append(f"|H|+|R| = {k} exceeds min(w/lambda, n)")
    return out


# -- driver -----------------------------------------------------------------

def find_bcd(g: WeightedGraph, lam: int, outer_cap: int | None = None, check: bool = True):
    """Run the search. Returns Completed or, once the outer index reaches outer_cap, CapHit."""
    if lam <= 0:
        raise LambdaNonPositive("lambda must be positive")
    for comp in connected_components(g):
        if induced_weight(g, comp) < lam:
            raise SmallComponent(f"component containing {min(comp)} weighs less than lambda")
    state = PBState(g, lam)

    def checked(step: str) -> None:
        state.record(step)
        if check:
            bad = state_violations(state)
            if bad:
                raise InvariantBroken(f"after {step}: {bad[:5]}")

    def capped() -> bool:
        return outer_cap is not None and state.outer_index() >= outer_cap

    remove_heavy(state)
    state.record("remove_heavy")
    if check:
        bad = crown_violations(g, state.cstar, state.hstar, state.fstar, lam)
        if bad:
            raise InvariantBroken(f"after remove_heavy: {bad[:5]}")
    initialise(state)
    checked("initialise")
    if capped():
        return CapHit(state, state.trace, 0)
    limit = 3 * (lam - 1)
    while True:
        target = None
        for r in list(state.parts):
            if state.effective_weight(r) > limit:
                target = r
                break
        if target is None:
            break
        eff = state.effective_set(target)
        res = divide_or_cut(g, eff, lam)
        state.divide_cut_steps += 1
        if isinstance(res, CutVertex):
            cut_step(state, target, res.x)
            checked("cut")
        else:
            divide_step(state, target, res.V1, res.V2)
            checked("divide")
        if capped():
            return CapHit(state, state.trace, state.divide_cut_steps)
        f = expansion_step(state)
        checked("expansion")
        ctx = assign_priv(state, f)
        mapping = merge_subcomp(state, ctx)
        fill_deficit(state, ctx, mapping)
        checked("private_assignment")
        merge_unassigned(state)
        checked("merge_unassigned")
    bcd = finalize(state)
    state.record("finalize")
    if check:
        bad = validate_bcd(g, bcd)
        if bad:
            raise InvariantBroken(f"final decomposition invalid: {bad[:5]}")
    return Completed(bcd, state.trace, state.divide_cut_steps)
