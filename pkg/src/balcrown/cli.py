"""Command-line front end.

Exit codes: 0 success, 1 a verified claim is violated, 2 usage or malformed
input, 3 infeasible instance, failed precondition or exhausted budget.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from . import applications as apps
from .engine import find_bcd
from .errors import BalcrownError, GraphFormatError, UnknownClaimKind
from .expansion import BipartiteWeighted, balanced_expansion
from .graph import induced_weight
from .io import ParsedGraph, dump_record, graph_from_block, load_record, make_record, parse_graph, to_dot
from .oracle import ORACLES, verify_result

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _labels(pg: ParsedGraph, vs) -> list[str]:
    return [pg.labels[v] for v in sorted(vs)]


def _ids(index: dict[str, int], labels) -> list[int]:
    try:
        return [index[str(x)] for x in labels]
    except KeyError as e:
        raise UsageError(f"record names unknown vertex {e.args[0]!r}") from None


def _groups(parts, prefix: str) -> dict[int, str]:
    return {v: f"{prefix}{i}" for i, p in enumerate(parts) for v in p}


# -- commands ---------------------------------------------------------------
# each returns (record, dot groups, dot shapes)

def cmd_bcd(pg: ParsedGraph, args):
    g = pg.graph
    res = find_bcd(g, args.lam)
    bcd = res.bcd
    outer = [t.outer for t in res.trace]
    trace = {"steps": len(res.trace), "divide_cut_steps": res.divide_cut_steps,
             "final_outer_index": outer[-1] if outer else 0,
             "outer_index_monotone": all(a <= b for a, b in zip(outer, outer[1:]))}
    if args.trace:
        trace["records"] = [t.as_dict() for t in res.trace]
    cert = {"C": _labels(pg, bcd.C), "H": _labels(pg, bcd.H),
            "R_parts": [_labels(pg, p) for p in bcd.R_parts],
            "f": [{"component": _labels(pg, q), "head": pg.labels[h]}
                  for q, h in sorted(bcd.f.items(), key=lambda x: min(x[0]))]}
    result = {"verdict": "Completed", "heads": len(bcd.H), "body_parts": len(bcd.R_parts)}
    groups = _groups(bcd.R_parts, "R")
    crown = {h: {h} for h in bcd.H}
    for q, h in bcd.f.items():
        crown[h] |= q
    groups.update({v: f"H{h}" for h, vs in crown.items() for v in vs})
    shapes = {h: "box" for h in bcd.H}
    return make_record("bcd", {"lambda": args.lam}, pg, result, cert, trace), groups, shapes


def _bipartite(pg: ParsedGraph, prefix: str) -> BipartiteWeighted:
    g = pg.graph
    side_a = {v for v in range(g.n) if pg.labels[v].startswith(prefix)}
    for u, v in g.edges():
        if (u in side_a) == (v in side_a):
            raise apps.InvalidParams(f"edge {pg.labels[u]} {pg.labels[v]} does not cross the two sides")
    return BipartiteWeighted({v: g.weights[v] for v in side_a},
                             {v: g.weights[v] for v in range(g.n) if v not in side_a},
                             [(u, v) if u in side_a else (v, u) for u, v in g.edges()])


def cmd_expansion(pg: ParsedGraph, args):
    bg = _bipartite(pg, args.a_prefix)
    be = balanced_expansion(bg, args.q)
    cert = {"A1": _labels(pg, be.A1), "A2": _labels(pg, be.A2),
            "f": {pg.labels[b]: pg.labels[a] for b, a in sorted(be.f.items())}}
    loads = {pg.labels[a]: be.load(bg, a) for a in bg.A}
    result = {"verdict": "Completed", "loads": loads}
    groups = {a: f"A{a}" for a in bg.A}
    groups.update({b: f"A{a}" for b, a in be.f.items()})
    shapes = {a: "box" for a in be.A1}
    rec = make_record("expansion", {"q": args.q, "a_prefix": args.a_prefix}, pg, result, cert)
    return rec, groups, shapes


def _kernel(pg: ParsedGraph, args, command: str):
    fn = apps.wsep_kernel if command == "sep-kernel" else apps.wpack_kernel
    kr = fn(pg.graph, args.W, args.k)
    C, H, f = kr.certificate or (frozenset(), (), {})
    cert = {"C": _labels(pg, C), "H": _labels(pg, H),
            "f": [{"component": _labels(pg, q), "head": pg.labels[h]}
                  for q, h in sorted(f.items(), key=lambda x: min(x[0]))],
            "forced": _labels(pg, kr.forced),
            "witness": [_labels(pg, s) for s in kr.witness],
            "reduced_vertices": [pg.labels[v] for v in kr.vertex_map]}
    result = {"verdict": kr.verdict, "reducedK": kr.reducedK,
              "reduced_n": kr.reducedGraph.n, "reduced_weight": kr.reducedGraph.total_weight()}
    groups = {v: "kernel" for v in kr.vertex_map}
    groups.update({v: "crown" for v in C})
    groups.update({v: "head" for v in H})
    groups.update({v: "forced" for v in kr.forced})
    rec = make_record(command, {"W": args.W, "k": args.k}, pg, result, cert, {"outer_index": kr.outer_index})
    return rec, groups, {h: "box" for h in H}


def cmd_pack_approx(pg: ParsedGraph, args):
    p = apps.wpack_approx(pg.graph, args.W)
    cert = {"sets": [_labels(pg, s) for s in p.parts]}
    result = {"size": len(p.parts), "set_weights": [induced_weight(pg.graph, s) for s in p.parts]}
    return make_record("pack-approx", {"W": args.W}, pg, result, cert), _groups(p.parts, "P"), None


def _probe_dicts(probes) -> list[dict]:
    out = []
    for p in probes:
        d = {"X": p.X, "accepted": p.accepted}
        if p.reason:
            d["reason"] = p.reason
        if p.cost is not None:
            d["flow_cost"] = str(p.cost)
        if p.saturated is not None:
            d["heads_saturated"] = p.saturated
        out.append(d)
    return out


def _bcp(pg: ParsedGraph, args, command: str):
    fn = apps.maxmin_bcp if command == "maxmin" else apps.minmax_bcp
    sol = fn(pg.graph, args.k)
    parts = sol.parts.parts
    cert = {"parts": [_labels(pg, p) for p in parts]}
    result = {"objective": sol.objective, "target": sol.target,
              "part_weights": [induced_weight(pg.graph, p) for p in parts]}
    trace = {"probes": _probe_dicts(sol.probes)}
    return make_record(command, {"k": args.k}, pg, result, cert, trace), _groups(parts, "P"), None


def cmd_bcep(pg: ParsedGraph, args):
    g = pg.graph
    edges = g.edges()
    eg = apps.EdgeWeightedGraph(g.n, edges, [pg.edge_weights.get(e, 1) for e in edges])
    sol = apps.maxmin_bcep(eg, args.k)
    cert = {"parts": [[[pg.labels[u], pg.labels[v]] for u, v in sorted(p)] for p in sol.parts]}
    result = {"objective": sol.objective}
    trace = {"probes": _probe_dicts(sol.line.probes)} if sol.line else {}
    return make_record("bcep-maxmin", {"k": args.k}, pg, result, cert, trace), {}, None


def cmd_oracle(pg: ParsedGraph, args):
    kind = args.kind
    param = args.k if kind in ("maxmin", "minmax") else args.W
    if param is None:
        raise UsageError(f"oracle {kind} needs {'--k' if kind in ('maxmin', 'minmax') else '--W'}")
    value = ORACLES[kind](pg.graph, param)
    rec = make_record("oracle", {"kind": kind, "param": param}, pg, {"value": value}, {})
    return rec, {}, None


# -- verify -----------------------------------------------------------------

def record_claim(record: dict) -> tuple[ParsedGraph, dict]:
    """Translate a result record into a dense-id claim for verify_result."""
    if record.get("schema") != "v1":
        raise UsageError("unsupported record schema")
    pg = graph_from_block(record["graph"])
    index = pg.index()
    cmd, params, res, cert = record["command"], record["params"], record["result"], record["certificate"]
    ids = lambda xs: _ids(index, xs)  # noqa: E731
    fmap = lambda fs: [{"component": ids(x["component"]), "head": ids([x["head"]])[0]} for x in fs]  # noqa: E731
    if cmd == "bcd":
        claim = {"kind": "bcd", "C": ids(cert["C"]), "H": ids(cert["H"]),
                 "R_parts": [ids(p) for p in cert["R_parts"]], "f": fmap(cert["f"]), "lambda": params["lambda"]}
    elif cmd == "expansion":
        bg = _bipartite(pg, params["a_prefix"])
        f = {ids([b])[0]: ids([a])[0] for b, a in cert["f"].items()}
        claim = {"kind": "expansion", "a_weights": bg.a_weights, "b_weights": bg.b_weights,
                 "edges": bg.edges(), "A1": ids(cert["A1"]), "A2": ids(cert["A2"]), "f": f, "q": params["q"]}
    elif cmd in ("sep-kernel", "pack-kernel"):
        claim = {"kind": cmd, "W": params["W"], "k": params["k"], "verdict": res["verdict"],
                 "reducedK": res["reducedK"], "C": ids(cert["C"]), "H": ids(cert["H"]), "f": fmap(cert["f"]),
                 "forced": ids(cert["forced"]), "witness": [ids(s) for s in cert["witness"]],
                 "vertex_map": ids(cert["reduced_vertices"])}
    elif cmd == "pack-approx":
        claim = {"kind": "pack-approx", "W": params["W"], "sets": [ids(s) for s in cert["sets"]],
                 "claimed_size": res["size"]}
    elif cmd in ("maxmin", "minmax"):
        claim = {"kind": cmd, "k": params["k"], "parts": [ids(p) for p in cert["parts"]],
                 "objective": res["objective"]}
    elif cmd == "bcep-maxmin":
        g = pg.graph
        edges = g.edges()
        parts = [[tuple(ids(e)) for e in p] for p in cert["parts"]]
        claim = {"kind": "bcep-maxmin", "n": g.n, "edges": edges,
                 "weights": [pg.edge_weights.get(e, 1) for e in edges], "parts": parts,
                 "k": params["k"], "objective": res["objective"]}
    elif cmd == "oracle":
        claim = {"kind": "oracle", "oracle": params["kind"], "param": params["param"], "value": res["value"]}
    else:
        raise UnknownClaimKind(f"unknown command {cmd!r} in record")
    return pg, claim


def cmd_verify(path: str) -> tuple[int, dict]:
    record = load_record(path)
    pg, claim = record_claim(record)
    violations = verify_result(pg.graph, claim)
    return (EXIT_VIOLATION if violations else EXIT_OK), {"violations": violations}


# -- generator --------------------------------------------------------------

def random_connected_graph(n: int, m: int, wmax: int, seed: int) -> str:
    rnd = random.Random(seed)
    edges = set()
    for v in range(1, n):
        u = rnd.randrange(v)
        edges.add((u, v))
    target = min(max(m, n - 1), n * (n - 1) // 2)
    while len(edges) < target:
        u, v = sorted(rnd.sample(range(n), 2))
        edges.add((u, v))
    lines = [f"# random connected graph, seed {seed}", f"p vwg {n} {len(edges)}"]
    lines += [f"v {v} {rnd.randint(1, wmax)}" for v in range(n)]
    lines += [f"e {u} {v}" for u, v in sorted(edges)]
    return "\n".join(lines) + "\n"


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trace", action="store_true", help="include the full step trace")
    common.add_argument("--seed", type=int, default=0, help="seed for generators")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    p = argparse.ArgumentParser(prog="balcrown", description="Balanced crown decompositions and their applications.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("graph", help="graph file ('-' for stdin)")
        return sp

    graph_cmd("bcd", "balanced crown decomposition").add_argument("--lambda", dest="lam", type=int, required=True)
    sp = graph_cmd("expansion", "balanced expansion of a bipartite graph")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--a-prefix", default="a", help="labels starting with this prefix form side A")
    for name, help_ in (("sep-kernel", "separator kernel"), ("pack-kernel", "packing kernel")):
        sp = graph_cmd(name, help_)
        sp.add_argument("--W", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
    graph_cmd("pack-approx", "packing approximation").add_argument("--W", type=int, required=True)
    for name in ("maxmin", "minmax", "bcep-maxmin"):
        graph_cmd(name, f"{name} balanced connected partition").add_argument("--k", type=int, required=True)
    sp = sub.add_parser("oracle", parents=[common], help="brute-force optimum on a small graph")
    sp.add_argument("kind", choices=sorted(ORACLES))
    sp.add_argument("graph")
    sp.add_argument("--k", type=int)
    sp.add_argument("--W", type=int)
    sp = sub.add_parser("verify", parents=[common], help="check a result record")
    sp.add_argument("record")
    sp = sub.add_parser("generate", parents=[common], help="random connected graph file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--wmax", type=int, default=1)
    return p


COMMANDS = {
    "bcd": cmd_bcd,
    "expansion": cmd_expansion,
    "sep-kernel": lambda pg, a: _kernel(pg, a, "sep-kernel"),
    "pack-kernel": lambda pg, a: _kernel(pg, a, "pack-kernel"),
    "pack-approx": cmd_pack_approx,
    "maxmin": lambda pg, a: _bcp(pg, a, "maxmin"),
    "minmax": lambda pg, a: _bcp(pg, a, "minmax"),
    "bcep-maxmin": cmd_bcep,
    "oracle": cmd_oracle,
}


def cli_dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        if args.command == "generate":
            if args.n < 1 or args.wmax < 1:
                raise UsageError("need n >= 1 and wmax >= 1")
            out.write(random_connected_graph(args.n, args.m, args.wmax, args.seed))
            return EXIT_OK
        if args.command == "verify":
            code, payload = cmd_verify(args.record)
            out.write(dump_record(payload) + "\n")
            return code
        pg = parse_graph(sys.stdin if args.graph == "-" else args.graph)
        start = time.perf_counter()
        record, groups, shapes = COMMANDS[args.command](pg, args)
        record["timing"]["seconds"] = round(time.perf_counter() - start, 6)
        if args.format == "dot":
            out.write(to_dot(pg, groups, args.command, shapes))
        else:
            out.write(dump_record(record) + "\n")
        return EXIT_OK
    except (GraphFormatError, UsageError, UnknownClaimKind, OSError, ValueError, KeyError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except BalcrownError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_INFEASIBLE


def main() -> None:
    sys.exit(cli_dispatch())
