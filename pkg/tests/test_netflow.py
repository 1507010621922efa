import itertools
import random

import pytest

from balcrown.errors import InfeasibleDemand, InvalidArc
from balcrown.netflow import (CostFlowNetwork, Flow, FlowNetwork, augmenting_step, flow_cost, flow_value,
                              has_negative_cycle, max_flow, min_cost_flow, residual_cost_arcs, residual_reachable)


def net_of(n, arcs, cost=False):
    net = (CostFlowNetwork if cost else FlowNetwork)(n, 0, n - 1)
    for arc in arcs:
        net.add_arc(*arc)
    return net


def feasible_flows(net):
    """Every integral flow respecting capacities and conservation (tiny networks only)."""
    for values in itertools.product(*(range(c + 1) for c in net.caps)):
        bal = [0] * net.n
        for t, h, x in zip(net.tails, net.heads, values):
            bal[t] -= x
            bal[h] += x
        if all(bal[v] == 0 for v in range(net.n) if v not in (net.source, net.sink)):
            yield list(values)


def random_net(rng, n, arcs, cap, cost=False):
    net = (CostFlowNetwork if cost else FlowNetwork)(n, 0, n - 1)
    for _ in range(arcs):
        u, v = rng.sample(range(n), 2)
        if cost:
            net.add_arc(u, v, rng.randint(0, cap), rng.randint(0, 4))
        else:
            net.add_arc(u, v, rng.randint(0, cap))
    return net


def test_single_arc():
    assert max_flow(net_of(2, [(0, 1, 5)])).value == 5


def test_bottleneck():
    assert max_flow(net_of(3, [(0, 1, 3), (1, 2, 2)])).value == 2


def test_max_flow_matches_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        net = random_net(rng, rng.randint(2, 5), rng.randint(1, 6), 2)
        f = max_flow(net)
        assert f.value == flow_value(net, f.values)
        assert f.value == max(flow_value(net, v) for v in feasible_flows(net))


def test_expansion_shaped_network():
    # s -> a_i (cap q - w(a)), a_i -> b_j (cap inf), b_j -> t (cap w(b)); |A| = 4, |B| = 7, q = 2
    rng = random.Random(5)
    A, B = range(1, 5), range(5, 12)
    net = FlowNetwork(13, 0, 12)
    for a in A:
        net.add_arc(0, a, 1)
    for b in B:
        net.add_arc(b, 12, 1)
        for a in rng.sample(list(A), 2):
            net.add_arc(a, b, 2)
    f = max_flow(net)
    assert f.value <= 4
    assert f.value == 4  # every a reaches two distinct b's, and Hall's condition holds for this seed
    assert residual_reachable(net, f, 0) & {12} == set()


def test_residual_reachable_examples():
    net = net_of(2, [(0, 1, 1)])
    assert residual_reachable(net, Flow([1], 1), 0) == {0}
    net = net_of(4, [(0, 1, 1), (1, 3, 1), (0, 2, 0)])
    assert residual_reachable(net, Flow([0, 0, 0], 0), 0) == {0, 1, 3}


def test_augmenting_step_examples():
    net = net_of(2, [(0, 1, 1)])
    assert augmenting_step(net, max_flow(net), 0)
    net = net_of(3, [(0, 1, 1), (1, 2, 5)])
    assert not augmenting_step(net, max_flow(net), 1)
    with pytest.raises(InvalidArc):
        augmenting_step(net, max_flow(net), 7)


def test_augmenting_step_matches_recompute():
    rng = random.Random(12)
    for _ in range(80):
        net = random_net(rng, rng.randint(2, 6), rng.randint(1, 9), 3)
        f = max_flow(net)
        for arc in range(net.num_arcs):
            bumped = FlowNetwork(net.n, net.source, net.sink, list(net.tails), list(net.heads), list(net.caps))
            bumped.caps[arc] += 1
            assert augmenting_step(net, f, arc) == (max_flow(bumped).value == f.value + 1)


def test_min_cost_parallel_arcs():
    net = net_of(2, [(0, 1, 1, 0), (0, 1, 1, 5)], cost=True)
    net.demand = 1
    f = min_cost_flow(net)
    assert f.values == [1, 0] and flow_cost(net, f) == 0
    net.demand = 2
    assert flow_cost(net, min_cost_flow(net)) == 5


def test_min_cost_matches_enumeration():
    rng = random.Random(13)
    checked = 0
    for _ in range(150):
        net = random_net(rng, rng.randint(2, 5), rng.randint(1, 6), 2, cost=True)
        best = {}
        for v in feasible_flows(net):
            val = flow_value(net, v)
            c = sum(x * y for x, y in zip(net.costs, v))
            best[val] = min(best.get(val, c), c)
        net.demand = max(best)
        f = min_cost_flow(net)
        assert f.value == net.demand
        assert flow_cost(net, f) == best[net.demand]
        assert not has_negative_cycle(net.n, residual_cost_arcs(net, f))
        checked += 1
    assert checked == 150


def test_infeasible_demand():
    net = net_of(2, [(0, 1, 1, 0)], cost=True)
    net.demand = 2
    with pytest.raises(InfeasibleDemand):
        min_cost_flow(net)


def test_rejects_negative_inputs():
    with pytest.raises(ValueError):
        net_of(2, [(0, 1, -1)])
    with pytest.raises(ValueError):
        net_of(2, [(0, 1, 1, -2)], cost=True)


def test_negative_cycle_detection():
    assert has_negative_cycle(2, [(0, 1, 1), (1, 0, -2)])
    assert not has_negative_cycle(2, [(0, 1, 1), (1, 0, -1)])
