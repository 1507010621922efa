import random

import pytest

from balcrown.engine import (BalancedCrownDecomposition, CapHit, Completed, PBState, find_bcd, initialise,
                             outer_index_cvp, remove_heavy, state_violations, validate_bcd)
from balcrown.errors import LambdaNonPositive, SmallComponent
from balcrown.graph import WeightedGraph, connected_components, induced_weight
from balcrown.partition import validate_cvp
from helpers import random_connected, random_graph

# instances that drive the search through its cut-vertex clean-up branch
FIXTURE_A = (
    [3, 1, 5, 5, 3, 5, 1, 4, 5, 4, 2, 1, 1, 1, 3, 5, 2, 5, 4], 7,
    [(0, 2), (0, 6), (0, 12), (0, 14), (0, 16), (1, 7), (1, 10), (1, 16), (1, 17), (2, 8), (2, 11), (2, 12),
     (2, 14), (2, 15), (2, 16), (3, 5), (3, 6), (3, 7), (3, 9), (3, 10), (4, 6), (4, 8), (4, 11), (4, 15), (5, 11),
     (5, 17), (6, 7), (6, 10), (6, 14), (6, 17), (7, 14), (7, 16), (7, 17), (7, 18), (9, 17), (12, 16), (13, 14),
     (13, 18), (16, 18)],
)
FIXTURE_B = (
    [1] * 11, 2,
    [(0, 1), (0, 3), (0, 8), (0, 9), (0, 10), (1, 5), (1, 6), (2, 5), (2, 7), (3, 4), (4, 6), (4, 7), (5, 6),
     (6, 8), (6, 9), (7, 8), (7, 9), (7, 10)],
)


def triangle(lam):
    return WeightedGraph([lam - 1] * 3, [(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("lam", [2, 3, 5])
def test_tight_triangle(lam):
    bcd = find_bcd(triangle(lam), lam).bcd
    assert bcd.C == set() and bcd.H == ()
    assert bcd.R_parts == [frozenset({0, 1, 2})]


def test_heavy_singleton_becomes_head():
    bcd = find_bcd(WeightedGraph([9]), 3).bcd
    assert bcd.H == (0,) and not bcd.R_parts
    assert not validate_bcd(WeightedGraph([9]), bcd)


def test_heavy_star_center():
    g = WeightedGraph([3, 1, 1, 1], [(0, 1), (0, 2), (0, 3)])
    state = PBState(g, 3)
    remove_heavy(state)
    assert state.hstar == [0]
    assert state.cstar == {1, 2, 3}
    assert all(h == 0 for _, h in state.fstar)


def test_no_heavy_vertex_means_no_op():
    g = WeightedGraph([1] * 4, [(0, 1), (1, 2), (2, 3)])
    state = PBState(g, 2)
    remove_heavy(state)
    assert not state.hstar and not state.cstar


def test_heavy_targets_lowest_neighbour():
    # vertex 2 hangs between two heavy vertices; it goes to the lower id
    g = WeightedGraph([4, 4, 1], [(0, 2), (1, 2)])
    state = PBState(g, 3)
    remove_heavy(state)
    assert state.fstar == [(frozenset({2}), 0)]


def test_fresh_state_cvp_is_components():
    g = WeightedGraph([1] * 6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    state = PBState(g, 2)
    remove_heavy(state)
    initialise(state)
    assert sorted(outer_index_cvp(state).parts, key=min) == connected_components(g)
    assert not state_violations(state)


@pytest.mark.parametrize("fixture", [FIXTURE_A, FIXTURE_B])
def test_cleanup_fixtures(fixture):
    weights, lam, edges = fixture
    g = WeightedGraph(weights, edges)
    res = find_bcd(g, lam)
    assert isinstance(res, Completed)
    assert any(t.step == "cut" for t in res.trace)
    assert not validate_bcd(g, res.bcd)


def test_rejects_bad_lambda_and_light_components():
    with pytest.raises(LambdaNonPositive):
        find_bcd(triangle(2), 0)
    with pytest.raises(SmallComponent):
        find_bcd(WeightedGraph([1, 1, 5], [(0, 1)]), 3)


def test_cap_hit_partition():
    g = WeightedGraph([1] * 12, [(i, i + 1) for i in range(11)])
    res = find_bcd(g, 2, outer_cap=3)
    assert isinstance(res, CapHit)
    assert res.outer_index >= 3
    assert validate_cvp(g, outer_index_cvp(res.state), 2, None, range(12))


def test_validator_flags_tampering():
    g = WeightedGraph([3, 1, 1, 1, 2, 2], [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)])
    bcd = find_bcd(g, 3).bcd
    assert not validate_bcd(g, bcd)
    assert 0 in bcd.H
    # an extra edge from the crown into the body
    g2 = WeightedGraph(g.weights, g.edges() + [(1, 5)])
    assert any(v.startswith("C-R edge") for v in validate_bcd(g2, bcd))
    # a head that carries too little
    light = BalancedCrownDecomposition(frozenset({1}), (0,), frozenset({2, 3, 4, 5}), [frozenset({2, 3, 4, 5})],
                                       {frozenset({1}): 0}, 5)
    g3 = WeightedGraph([2, 1, 2, 2, 2, 2], [(0, 1), (0, 2), (2, 3), (3, 4), (4, 5)])
    assert any(v.startswith("head 0 under lambda") for v in validate_bcd(g3, light))


def test_deterministic():
    rng = random.Random(41)
    g = random_connected(rng, 25, wmax=3, extra=0.5)
    assert find_bcd(g, 4).bcd == find_bcd(g, 4).bcd


def test_random_sweep_with_progress():
    rng = random.Random(42)
    for _ in range(60):
        lam = rng.randint(2, 4)
        g = random_graph(rng, rng.randint(1, 14), rng.choice([0.15, 0.3, 0.5]), wmax=3)
        if any(induced_weight(g, c) < lam for c in connected_components(g)):
            continue
        res = find_bcd(g, lam)
        bcd = res.bcd
        assert not validate_bcd(g, bcd)
        assert len(bcd.H) + len(bcd.R_parts) <= min(g.total_weight() // lam, g.n)
        outers = [t.outer for t in res.trace]
        assert outers == sorted(outers)
        k = min(g.total_weight() // lam, g.n)
        assert res.divide_cut_steps <= k * k
        for h in bcd.H:
            load = bcd.head_load(g, h)
            assert load >= lam
            if g.weights[h] < lam:
                assert 2 * lam - 1 <= load <= 3 * lam - 3


def test_inner_index_monotone_within_outer():
    rng = random.Random(43)
    for _ in range(60):
        lam = rng.randint(2, 5)
        g = random_connected(rng, rng.randint(4, 30), wmax=lam, extra=0.4)
        trace = find_bcd(g, lam).trace
        for a, b in zip(trace, trace[1:]):
            if a.outer == b.outer:
                assert a.inner <= b.inner, (a, b)
