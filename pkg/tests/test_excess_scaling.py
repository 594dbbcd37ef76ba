import math
import random

import pytest

from cutkit.errors import FlowError
from cutkit.excess_scaling import (CUT_FOUND, ROUTED, RUNNING,
                                   ExcessScalingRun, excess_scaling,
                                   routed_per_origin)
from cutkit.multigraph import MultiGraph
from cutkit.oracles import verify_preflow
from cutkit.unit_flow import SourceFunction

from conftest import barbell_edges, clique_edges, cycle_edges, path_edges, \
    random_connected_graph


def check_accounting(out):
    run = out.state
    g = run.g
    total = (sum(run.routed.values()) + sum(run.discarded.values())
             + run.residue_total())
    assert total == run.delta.total
    # cumulative capacity 2UF per edge slot
    cap = 2 * run.U * run.F
    for slots in run.cum_flows.values():
        assert all(abs(f) <= cap for f in slots)
    # the cumulative pre-flow satisfies the flow identity
    claimed = run.flow_ending_supply()
    bad = verify_preflow(g, run.delta.vertex_totals(), cap, run.arc_flows(),
                         claimed)
    assert bad == []
    # whatever ends at a vertex covers what was kept there
    deg = g.deg
    for v, items in run.routed_by_vertex.items():
        assert sum(a for _, a in items) <= deg[v]


def test_immediate_termination_supply_within_sinks():
    g = MultiGraph.from_edge_list(clique_edges(4))
    delta = SourceFunction.from_totals({v: g.deg[v] for v in range(4)})
    out = excess_scaling(g, delta, tau=0.1, U=4, h=10)
    assert out.case == ROUTED
    assert out.state.F == 1
    assert out.state.j == 0
    assert sum(out.state.routed.values()) == delta.total
    assert out.state.cum_flows == {}
    check_accounting(out)


def test_cycle_concentrated_supply_routes():
    g = MultiGraph.from_edge_list(cycle_edges(8))
    delta = SourceFunction.from_totals({0: 2 * g.m})   # all 16 units on v0
    out = excess_scaling(g, delta, tau=0.1, U=8, h=12)
    assert out.case == ROUTED
    assert out.routed_total >= math.ceil(0.9 * delta.total)
    check_accounting(out)


def test_barbell_bottleneck_returns_cut():
    g = MultiGraph.from_edge_list(barbell_edges(5))
    # all supply on one clique: the bridge is a bottleneck
    delta = SourceFunction.from_totals(
        {v: 2 * g.deg[v] for v in range(5)})
    # pad to <= 2m; concentrated supply cannot cross the single bridge
    out = excess_scaling(g, delta, tau=0.1, U=1, h=20)
    assert out.case == CUT_FOUND
    assert out.cut.side == frozenset(range(5))
    check_accounting(out)


def test_routed_per_origin_identity():
    g = MultiGraph.from_edge_list(cycle_edges(6))
    delta = SourceFunction.from_totals({v: g.deg[v] for v in range(6)})
    out = excess_scaling(g, delta, tau=0.2, U=2, h=8)
    sf = routed_per_origin(out.state)
    assert sf.total == out.routed_total == delta.total
    assert sf.per_origin_totals() == delta.per_origin_totals()


def test_two_origin_descending_discard_hand_trace():
    # Path 0 -(x1)- 1 -(x5)- 2 with degrees (1, 6, 5); vertex 0 carries one
    # unit each of origins 2 and 7, vertex 1 carries 10 of origin 1.  F = 1,
    # so phase 0 runs in unit 1.  Hand trace with h = 2, U = 1: vertices 0
    # and 1 relabel to 1; vertex 0 finds no eligible arc (its only neighbor
    # also sits at label 1) and ratchets to the cap h = 2 with excess 1;
    # vertex 1 pushes 4 units of origin 1 to vertex 2 and deactivates.
    # The discard step then removes vertex 0's one excess unit in
    # descending-origin order, i.e. from origin 7, keeping origin 2.
    # The sweep cut fires the (tiny) volume threshold and the run exits
    # with the smaller side {2}.
    g = MultiGraph.from_edge_list([(0, 1, 1), (1, 2, 5)])
    delta = SourceFunction({0: {2: 1, 7: 1}, 1: {1: 10}})
    run = ExcessScalingRun(g, delta, tau=0.5, U=1, h=2)
    assert run.F == 1
    status = run.step()
    assert status == CUT_FOUND
    assert run.discarded == {7: 1}
    assert run.cut.side == frozenset({2})
    assert run.routed == {1: 10, 2: 1}
    assert run.leftover == {}


def test_phase_preconditions_enforced():
    g = MultiGraph.from_edge_list(path_edges(3))
    with pytest.raises(FlowError, match="tau"):
        ExcessScalingRun(g, SourceFunction.from_totals({0: 1}), tau=1.5,
                         U=1, h=5)
    with pytest.raises(FlowError, match="exceeds 2m"):
        ExcessScalingRun(g, SourceFunction.from_totals({0: 99}), tau=0.1,
                         U=1, h=5)


def test_resumable_lockstep_equivalence():
    g = MultiGraph.from_edge_list(cycle_edges(8))
    delta = SourceFunction.from_totals({0: 2 * g.m})
    whole = excess_scaling(g, delta, tau=0.1, U=8, h=12)
    stepped = ExcessScalingRun(g, delta, tau=0.1, U=8, h=12)
    while stepped.status == RUNNING:
        stepped.step()
    assert stepped.status == whole.case
    assert stepped.routed == whole.state.routed
    assert stepped.cum_flows == whole.state.cum_flows


def test_random_corpus_invariants():
    rng = random.Random(555)
    routed_seen = cut_seen = 0
    for _ in range(120):
        g = random_connected_graph(rng, rng.randrange(3, 14))
        total = 2 * g.m
        # spread supply over a random prefix of vertices, respecting caps
        entries = {}
        remaining = total
        order = list(range(g.n))
        rng.shuffle(order)
        for v in order:
            if remaining <= 0:
                break
            cap = 2 * g.deg[v] * max(1, rng.randrange(1, 9))
            take = min(cap, remaining) if rng.random() < 0.7 else 0
            if take:
                entries[v] = {rng.randrange(3): take}
                remaining -= take
        if remaining > 0 or not entries:
            continue
        delta = SourceFunction(entries)
        tau = rng.choice([0.1, 0.25, 0.5])
        out = excess_scaling(g, delta, tau=tau,
                             U=rng.randint(1, 20),
                             h=rng.randint(max(1, math.ceil(math.log(g.m))),
                                           30))
        check_accounting(out)
        if out.case == ROUTED:
            routed_seen += 1
            assert out.routed_total >= (1 - tau) * delta.total
            deg = out.state.g.deg
            for v, tot in out.state.raw_total.items():
                assert tot <= deg[v]
        else:
            cut_seen += 1
            assert out.cut.vol_side <= out.cut.vol_rest
    assert routed_seen > 0 and cut_seen > 0


def test_determinism_bitwise():
    rng = random.Random(9)
    g = random_connected_graph(rng, 10)
    delta = SourceFunction.from_totals({0: g.deg[0] * 4, 3: g.deg[3] * 2})
    a = excess_scaling(g, delta, tau=0.1, U=3, h=9)
    b = excess_scaling(g, delta, tau=0.1, U=3, h=9)
    assert a.case == b.case
    assert a.state.cum_flows == b.state.cum_flows
    assert a.state.routed == b.state.routed
    assert a.state.discarded == b.state.discarded
