"""Brute-force optima and certificate checkers.

Nothing here calls into the decomposition, flow or partition code: the
enumerations and the checks below only read vertex weights and adjacency,
so they can serve as ground truth for those modules.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded, Infeasible, UnknownClaimKind


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 10
    max_partitions: int = 5_000_000


DEFAULT_BUDGET = OracleBudget()


def _guard(g, budget: OracleBudget) -> None:
    if g.n > budget.max_vertices:
        raise BudgetExceeded(f"{g.n} vertices exceed the oracle budget of {budget.max_vertices}")


def _masks(g) -> list[int]:
    return [sum(1 << u for u in g.adj[v]) for v in range(g.n)]


class _Conn:
    """Connectivity and weight of vertex subsets encoded as bitmasks, memoised."""

    def __init__(self, g):
        self.nb = _masks(g)
        self.w = list(g.weights)
        self.memo: dict[int, bool] = {}

    def connected(self, mask: int) -> bool:
        if mask == 0:
            return False
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            v = low.bit_length() - 1
            new = self.nb[v] & mask & ~seen
            seen |= new
            frontier |= new
        ok = seen == mask
        self.memo[mask] = ok
        return ok

    def weight(self, mask: int) -> int:
        total = 0
        while mask:
            low = mask & -mask
            total += self.w[low.bit_length() - 1]
            mask ^= low
        return total

    def components(self, mask: int) -> list[int]:
        out = []
        while mask:
            start = mask & -mask
            seen = start
            frontier = start
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                new = self.nb[low.bit_length() - 1] & mask & ~seen
                seen |= new
                frontier |= new
            out.append(seen)
            mask &= ~seen
        return out


def connected_k_partitions(g, k: int, budget: OracleBudget = DEFAULT_BUDGET):
    """Yield every partition of V into exactly k connected blocks, as lists of bitmasks.

    Blocks are built as restricted-growth strings: vertex i joins an existing
    block or opens the next one.
    """
    _guard(g, budget)
    n = g.n
    conn = _Conn(g)
    blocks: list[int] = []
    count = 0

    def rec(i: int):
        nonlocal count
        if n - i < k - len(blocks):
            return
        if i == n:
            if len(blocks) == k and all(conn.connected(b) for b in blocks):
                count += 1
                if count > budget.max_partitions:
                    raise BudgetExceeded("partition enumeration budget exhausted")
                yield list(blocks)
            return
        bit = 1 << i
        for j in range(len(blocks)):
            blocks[j] |= bit
            yield from rec(i + 1)
            blocks[j] ^= bit
        if len(blocks) < k:
            blocks.append(bit)
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def _best_partition(g, k: int, better, budget: OracleBudget) -> int:
    if k < 1 or g.n < k:
        raise Infeasible("no connected partition into k parts")
    conn = _Conn(g)
    best = None
    for blocks in connected_k_partitions(g, k, budget):
        ws = [conn.weight(b) for b in blocks]
        val = better(ws)
        if best is None or (val > best if better is min else val < best):
            best = val
    if best is None:
        raise Infeasible("no connected partition into k parts")
    return best


def oracle_maxmin(g, k: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Largest possible weight of the lightest part over all connected k-partitions."""
    return _best_partition(g, k, min, budget)


def oracle_minmax(g, k: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Smallest possible weight of the heaviest part over all connected k-partitions."""
    return _best_partition(g, k, max, budget)


def oracle_wsep(g, W: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Fewest vertices whose removal leaves only components lighter than W."""
    _guard(g, budget)
    conn = _Conn(g)
    full = (1 << g.n) - 1
    for size in range(g.n + 1):
        for removed in combinations(range(g.n), size):
            rest = full & ~sum(1 << v for v in removed)
            if all(conn.weight(c) < W for c in conn.components(rest)):
                return size
    return g.n


def oracle_wpack(g, W: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Most disjoint connected vertex sets of weight at least W."""
    _guard(g, budget)
    conn = _Conn(g)
    memo: dict[int, int] = {}

    def best(mask: int) -> int:
        if mask == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        low = mask & -mask
        rest = mask ^ low
        value = best(rest)
        # every set containing the lowest vertex
        sub = rest
        while True:
            s = sub | low
            if conn.weight(s) >= W and conn.connected(s):
                value = max(value, 1 + best(mask & ~s))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        memo[mask] = value
        return value

    return best((1 << g.n) - 1)


# -- certificate checks -----------------------------------------------------

def _weight(g, vs) -> int:
    return sum(g.weights[v] for v in vs)


def _is_connected(g, vs) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        for u in g.adj[stack.pop()]:
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vs)


def _components(g, vs) -> list[set[int]]:
    left = set(vs)
    out = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            for u in g.adj[stack.pop()]:
                if u in left and u not in comp:
                    comp.add(u)
                    stack.append(u)
        left -= comp
        out.append(comp)
    return out


def _check_sets(g, sets, lo=None, hi=None, cover=None, what="part") -> list[str]:
    out = []
    seen: set[int] = set()
    for i, s in enumerate(sets):
        s = set(s)
        if any(not (0 <= v < g.n) for v in s):
            out.append(f"{what} {i} names an unknown vertex")
            continue
        if seen & s:
            out.append(f"{what} {i} overlaps another {what}")
        seen |= s
        if not _is_connected(g, s):
            out.append(f"{what} {i} is not connected")
        w = _weight(g, s)
        if lo is not None and w < lo:
            out.append(f"{what} {i} weighs {w} < {lo}")
        if hi is not None and w > hi:
            out.append(f"{what} {i} weighs {w} > {hi}")
    if cover is not None and seen != set(cover):
        out.append(f"{what}s do not cover the required vertices")
    return out


def check_crown(g, C, H, f, lam: int) -> list[str]:
    """Head/crown conditions: H separates C from the rest, light crown components, heads carry >= lam."""
    out = []
    C, H = set(C), set(H)
    if C & H:
        out.append("crown and head overlap")
    for v in C:
        for u in g.adj[v]:
            if u not in C and u not in H:
                out.append(f"crown vertex {v} is adjacent to {u} outside the head")
    comps = _components(g, C)
    keys = [frozenset(q) for q, _ in f]
    for q in comps:
        if _weight(g, q) >= lam:
            out.append(f"crown component {sorted(q)} weighs {_weight(g, q)} >= {lam}")
        if frozenset(q) not in keys:
            out.append(f"crown component {sorted(q)} has no head")
    load = {h: g.weights[h] for h in H}
    for q, h in f:
        if h not in H:
            out.append(f"crown component {sorted(q)} assigned to non-head {h}")
            continue
        if not any(h in g.adj[v] for v in q):
            out.append(f"crown component {sorted(q)} is not adjacent to head {h}")
        load[h] += _weight(g, q)
    for h, x in sorted(load.items()):
        if x < lam:
            out.append(f"head {h} carries weight {x} < {lam}")
    return out


def check_bcd(g, C, H, R_parts, f, lam: int) -> list[str]:
    out = check_crown(g, C, H, f, lam)
    rest = set(range(g.n)) - set(C) - set(H)
    out += _check_sets(g, R_parts, lam, 3 * lam - 3, rest, "body part")
    k = len(set(H)) + len(R_parts)
    if k > min(sum(g.weights) // lam, g.n):
        out.append(f"|H| + |body parts| = {k} exceeds min(w(G)/lambda, n)")
    return out


def check_separator(g, S, W: int, k: int | None = None) -> list[str]:
    out = []
    rest = set(range(g.n)) - set(S)
    for comp in _components(g, rest):
        if _weight(g, comp) >= W:
            out.append(f"component {sorted(comp)} weighs {_weight(g, comp)} >= {W}")
    if k is not None and len(set(S)) > k:
        out.append(f"separator has {len(set(S))} > {k} vertices")
    return out


def check_packing(g, sets, W: int, size: int | None = None) -> list[str]:
    out = _check_sets(g, sets, W, None, None, "set")
    if size is not None and len(sets) < size:
        out.append(f"packing has {len(sets)} < {size} sets")
    return out


def check_partition(g, parts, k: int, objective: int | None = None, sense: str = "min") -> list[str]:
    out = _check_sets(g, parts, None, None, range(g.n))
    if len(parts) != k:
        out.append(f"{len(parts)} parts instead of {k}")
    if objective is not None and parts and not out:
        ws = [_weight(g, p) for p in parts]
        actual = min(ws) if sense == "min" else max(ws)
        if actual != objective:
            out.append(f"objective {objective} but parts give {actual}")
    return out


def check_edge_partition(n: int, edges, weights, parts, k: int, objective: int | None = None) -> list[str]:
    out = []
    index = {tuple(sorted(e)): i for i, e in enumerate(edges)}
    seen: set[int] = set()
    ws = []
    for i, part in enumerate(parts):
        ids = []
        for e in part:
            key = tuple(sorted(e))
            if key not in index:
                out.append(f"edge part {i} names unknown edge {e}")
            else:
                ids.append(index[key])
        if seen & set(ids):
            out.append(f"edge part {i} overlaps another")
        seen |= set(ids)
        ws.append(sum(weights[j] for j in ids))
        # the edges must form a connected subgraph
        verts: dict[int, set[int]] = {}
        for j in ids:
            u, v = edges[j]
            verts.setdefault(u, set()).add(v)
            verts.setdefault(v, set()).add(u)
        if not verts:
            out.append(f"edge part {i} is empty")
            continue
        start = next(iter(verts))
        reach = {start}
        stack = [start]
        while stack:
            for x in verts[stack.pop()]:
                if x not in reach:
                    reach.add(x)
                    stack.append(x)
        if len(reach) != len(verts):
            out.append(f"edge part {i} is not connected")
    if seen != set(range(len(edges))):
        out.append("edge parts do not cover every edge")
    if len(parts) != k:
        out.append(f"{len(parts)} edge parts instead of {k}")
    if objective is not None and ws and not out and min(ws) != objective:
        out.append(f"objective {objective} but parts give {min(ws)}")
    return out


def check_expansion(a_weights: dict, b_weights: dict, edges, A1, A2, f: dict, q: int) -> list[str]:
    """Balanced expansion conditions on a bipartite graph with the given side weights."""
    out = []
    a_adj = {a: set() for a in a_weights}
    b_adj = {b: set() for b in b_weights}
    for a, b in edges:
        a_adj[a].add(b)
        b_adj[b].add(a)
    A1, A2 = set(A1), set(A2)
    if A1 & A2 or (A1 | A2) != set(a_weights):
        out.append("A1 and A2 do not partition A")
    if set(f) != set(b_weights):
        out.append("not every B vertex is assigned")
    wmax = max(b_weights.values(), default=0)
    load = dict(a_weights)
    for b, a in f.items():
        if a not in b_adj.get(b, ()):
            out.append(f"B vertex {b} assigned to non-neighbour {a}")
            continue
        load[a] += b_weights[b]
        if a in A1 and any(x not in A1 for x in b_adj[b]):
            out.append(f"B vertex {b} assigned into A1 but adjacent outside A1")
    for a, x in load.items():
        if a in A1 and x < q - wmax + 1:
            out.append(f"A1 vertex {a} load {x} < q - wmax + 1")
        if a in A2 and x > q + wmax - 1:
            out.append(f"A2 vertex {a} load {x} > q + wmax - 1")
    return out


ORACLES = {
    "maxmin": oracle_maxmin,
    "minmax": oracle_minmax,
    "wsep": oracle_wsep,
    "wpack": oracle_wpack,
}


def verify_result(g, claim: dict) -> list[str]:
    """Violations of a result claim given in dense vertex ids (empty list means it holds).

    `claim["kind"]` selects the check; the remaining keys are the fields of
    the matching result record.
    """
    kind = claim.get("kind")
    if kind == "bcd":
        f = [(frozenset(x["component"]), x["head"]) for x in claim["f"]]
        return check_bcd(g, claim["C"], claim["H"], claim["R_parts"], f, claim["lambda"])
    if kind == "expansion":
        return check_expansion(claim["a_weights"], claim["b_weights"], claim["edges"],
                               claim["A1"], claim["A2"], claim["f"], claim["q"])
    if kind in ("sep-kernel", "pack-kernel"):
        return _check_kernel(g, claim)
    if kind == "separator":
        return check_separator(g, claim["S"], claim["W"], claim.get("k"))
    if kind in ("packing", "pack-approx"):
        out = check_packing(g, claim["sets"], claim["W"], claim.get("size"))
        if "claimed_size" in claim and claim["claimed_size"] != len(claim["sets"]):
            out.append(f"claimed size {claim['claimed_size']} but {len(claim['sets'])} sets given")
        return out
    if kind == "maxmin":
        return check_partition(g, claim["parts"], claim["k"], claim.get("objective"), "min")
    if kind == "minmax":
        return check_partition(g, claim["parts"], claim["k"], claim.get("objective"), "max")
    if kind == "bcep-maxmin":
        return check_edge_partition(claim["n"], claim["edges"], claim["weights"], claim["parts"],
                                    claim["k"], claim.get("objective"))
    if kind == "oracle":
        value = ORACLES[claim["oracle"]](g, claim["param"])
        return [] if value == claim["value"] else [f"oracle value {claim['value']} but enumeration gives {value}"]
    raise UnknownClaimKind(f"unknown claim kind {kind!r}")


def _check_kernel(g, claim: dict) -> list[str]:
    W, k, verdict = claim["W"], claim["k"], claim["verdict"]
    sep = claim["kind"] == "sep-kernel"
    out = []
    forced = set(claim.get("forced", ()))
    if sep and forced != {v for v in range(g.n) if g.weights[v] >= W}:
        out.append("forced vertices are not exactly those of weight >= W")
    if verdict == "TriviallyNo" and sep:
        # more than k disjoint sets of weight >= W each need their own separator vertex
        out += check_packing(g, claim["witness"], W)
        if len(claim["witness"]) <= k:
            out.append(f"witness has {len(claim['witness'])} <= k sets")
        return out
    if verdict == "TriviallyYes" and not sep:
        out += check_packing(g, claim["witness"], W)
        if len(claim["witness"]) < k:
            out.append(f"witness has {len(claim['witness'])} < k sets")
        return out
    if verdict != "Reduced":
        return out + [f"verdict {verdict} not valid here"]
    C, H = set(claim["C"]), set(claim["H"])
    f = [(frozenset(x["component"]), x["head"]) for x in claim["f"]]
    keep = set(range(g.n)) - forced
    heavy = set()
    for comp in _components(g, keep):
        if _weight(g, comp) >= W:
            heavy |= comp
    if not (C | H) <= heavy:
        out.append("crown or head outside the heavy components")
    sub_out = check_crown(g, C, H, f, W)
    out += sub_out
    kept = set(claim["vertex_map"])
    if kept != heavy - C - H:
        out.append("reduced graph is not the heavy part minus crown and head")
    expect_k = k - len(forced) - len(H)
    if claim["reducedK"] != expect_k:
        out.append(f"reduced k {claim['reducedK']} != {expect_k}")
    if expect_k < 0:
        out.append("reduced k is negative")
    bound = 3 * k * (W - 1)
    if _weight(g, kept) > bound:
        out.append(f"reduced weight {_weight(g, kept)} exceeds 3k(W-1) = {bound}")
    return out
