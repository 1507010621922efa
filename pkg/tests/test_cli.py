import io
import json
import subprocess
import sys

import pytest

from balcrown.cli import cli_dispatch, random_connected_graph
from balcrown.io import parse_graph_text

TRIANGLE = "p vwg 3 3\nv x 1\nv y 1\nv z 1\ne x y\ne y z\ne x z\n"
BIPARTITE = "p vwg 5 4\nv a1 1\nv a2 1\nv b1 1\nv b2 1\nv b3 1\ne a1 b1\ne a1 b2\ne a2 b2\ne a2 b3\n"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_dispatch([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def graphs(tmp_path):
    files = {}
    for name, text in (("tri", TRIANGLE), ("bip", BIPARTITE), ("rand", random_connected_graph(9, 14, 3, 5))):
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        files[name] = path
    return files


def round_trip(tmp_path, *argv):
    code, out, err = run(*argv)
    assert code == 0, err
    path = tmp_path / "record.json"
    path.write_text(out)
    return path, json.loads(out)


def test_bcd_triangle(tmp_path, graphs):
    path, rec = round_trip(tmp_path, "bcd", "--lambda", 2, graphs["tri"])
    assert rec["certificate"]["R_parts"] == [["x", "y", "z"]]
    assert rec["certificate"]["C"] == [] and rec["certificate"]["H"] == []
    assert run("verify", path)[0] == 0


def test_tampered_record_fails(tmp_path, graphs):
    path, rec = round_trip(tmp_path, "bcd", "--lambda", 2, graphs["tri"])
    rec["certificate"]["R_parts"] = [["x", "y"], ["z"]]
    path.write_text(json.dumps(rec))
    code, out, _ = run("verify", path)
    assert code == 1 and json.loads(out)["violations"]


@pytest.mark.parametrize("argv", [
    ["bcd", "--lambda", 3, "--trace"],
    ["sep-kernel", "--W", 3, "--k", 2],
    ["sep-kernel", "--W", 2, "--k", 1],
    ["pack-kernel", "--W", 3, "--k", 2],
    ["pack-kernel", "--W", 4, "--k", 9],
    ["pack-approx", "--W", 3],
    ["maxmin", "--k", 3],
    ["minmax", "--k", 3],
    ["bcep-maxmin", "--k", 2],
    ["oracle", "maxmin", "--k", 2],
    ["oracle", "wpack", "--W", 3],
])
def test_every_success_verifies(tmp_path, graphs, argv):
    cmd = argv[:2] if argv[0] == "oracle" else argv[:1]
    rest = argv[2:] if argv[0] == "oracle" else argv[1:]
    path, rec = round_trip(tmp_path, *cmd, graphs["rand"], *rest)
    assert rec["command"] == argv[0]
    code, out, _ = run("verify", path)
    assert code == 0, out


def test_expansion(tmp_path, graphs):
    path, rec = round_trip(tmp_path, "expansion", "--q", 2, graphs["bip"])
    assert run("verify", path)[0] == 0


def test_dot_format(graphs):
    code, out, _ = run("bcd", "--lambda", 2, "--format", "dot", graphs["rand"])
    assert code == 0 and out.startswith("graph ")


def test_exit_codes(tmp_path, graphs):
    assert run("bcd", graphs["tri"])[0] == 2  # missing --lambda
    assert run("bcd", "--lambda", 2, tmp_path / "missing.txt")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("p vwg 1 0\nv x 0\n")
    code, _, err = run("bcd", "--lambda", 2, bad)
    assert code == 2 and "line 2" in err
    assert run("bcd", "--lambda", 9, graphs["tri"])[0] == 3  # component lighter than lambda
    big = tmp_path / "big.txt"
    big.write_text(random_connected_graph(14, 20, 1, 1))
    assert run("oracle", "maxmin", big, "--k", 2)[0] == 3
    assert run("maxmin", "--k", 20, graphs["tri"])[0] == 3


def test_generate():
    code, out, _ = run("generate", "--n", 12, "--m", 20, "--wmax", 4, "--seed", 3)
    pg = parse_graph_text(out)
    assert code == 0 and pg.graph.n == 12 and pg.graph.m == 20
    assert max(pg.graph.weights) <= 4
    assert run("generate", "--n", 12, "--m", 20, "--wmax", 4, "--seed", 3)[1] == out


def test_module_entry_point(graphs):
    proc = subprocess.run([sys.executable, "-m", "balcrown", "bcd", "--lambda", "2", str(graphs["tri"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verdict"] == "Completed"
