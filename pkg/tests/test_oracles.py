import random
from fractions import Fraction

import pytest

from cutkit.errors import VerificationError
from cutkit.multigraph import MultiGraph
from cutkit import oracles

from conftest import barbell_edges, clique_edges, cycle_edges, path_edges, \
    random_connected_graph


def test_edge_connectivity_k4():
    g = MultiGraph.from_edge_list(clique_edges(4))
    value, witness = oracles.exact_edge_connectivity(g)
    assert value == 3
    assert g.cut_stats(witness).boundary == 3


def test_edge_connectivity_path():
    g = MultiGraph.from_edge_list(path_edges(3))
    value, _ = oracles.exact_edge_connectivity(g)
    assert value == 1


def test_edge_connectivity_glued_cliques():
    g = MultiGraph.from_edge_list(barbell_edges(6, b=3))
    value, witness = oracles.exact_edge_connectivity(g)
    assert value == 3
    assert g.cut_stats(witness).boundary == 3
    assert oracles.brute_edge_connectivity(g) == 3


def test_edge_connectivity_multiplicity():
    g = MultiGraph.from_edge_list([(0, 1, 7)])
    value, _ = oracles.exact_edge_connectivity(g)
    assert value == 7


def test_edge_connectivity_disconnected():
    g = MultiGraph.from_edge_list([(0, 1, 1), (2, 3, 1)])
    value, witness = oracles.exact_edge_connectivity(g)
    assert value == 0
    assert witness == frozenset({0, 1})


def test_oracle_self_consistency_small_corpus():
    rng = random.Random(99)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randrange(2, 11))
        maxflow_ans, _ = oracles.exact_edge_connectivity(g)
        assert maxflow_ans == oracles.brute_edge_connectivity(g)


def test_min_conductance_k4():
    g = MultiGraph.from_edge_list(clique_edges(4))
    # splits of K4: singleton 3/3 = 1, pair 4/6 = 2/3 -> minimum 2/3
    r = oracles.brute_min_conductance(g)
    assert r.conductance == Fraction(2, 3)


def test_min_conductance_c6():
    g = MultiGraph.from_edge_list(cycle_edges(6))
    r = oracles.brute_min_conductance(g)
    assert r.conductance == Fraction(1, 3)
    assert len(r.side) == 3


def test_min_conductance_barbell():
    g = MultiGraph.from_edge_list(barbell_edges(5))
    r = oracles.brute_min_conductance(g)
    assert r.conductance == Fraction(1, 21)


def test_min_conductance_refusal():
    g = MultiGraph.from_edge_list(path_edges(25))
    with pytest.raises(VerificationError):
        oracles.brute_min_conductance(g)


def test_verify_preflow_zero_flow():
    g = MultiGraph.from_edge_list(path_edges(3))
    delta = {0: 2}
    assert oracles.verify_preflow(g, delta, 5, {}, {0: 2}) == []


def test_verify_preflow_antisymmetry_violation():
    g = MultiGraph.from_edge_list(path_edges(3))
    flows = {(0, 1, 0): 1, (1, 0, 0): 1}
    bad = oracles.verify_preflow(g, {0: 1}, 5, flows, {0: 0, 1: 2})
    assert any("antisymmetry" in b for b in bad)


def test_verify_preflow_catches_capacity():
    g = MultiGraph.from_edge_list(path_edges(2))
    flows = {(0, 1, 0): 9, (1, 0, 0): -9}
    bad = oracles.verify_preflow(g, {0: 9}, 5, flows, {0: 0, 1: 9})
    assert any("capacity" in b for b in bad)


def test_verify_strong_singleton():
    g = MultiGraph.from_edge_list(clique_edges(5))
    assert oracles.verify_strong(g, {0}, 0, 4, 0)


def test_verify_strong_barbell():
    g = MultiGraph.from_edge_list(barbell_edges(5))
    comp = range(10)
    # bridge cut: each side holds a K5 (volume 20) plus its bridge endpoint
    # degree, so vol_C of either side is 21; s must cover the lighter side
    assert not oracles.verify_strong(g, comp, 20, 1, 1)
    assert oracles.verify_strong(g, comp, 21, 1, 1)


def test_verify_strong_vacuous_on_clique():
    g = MultiGraph.from_edge_list(clique_edges(6))
    # no cut of size <= 2 exists at all in K6
    assert oracles.verify_strong(g, range(6), 0, 2, 0)


def test_verify_cluster_singleton():
    g = MultiGraph.from_edge_list(clique_edges(4))
    assert oracles.verify_cluster(g, {0}, 3)


def test_verify_cluster_clique_vacuous():
    g = MultiGraph.from_edge_list(barbell_edges(6, b=3))
    # delta below every cut touching the clique: vacuously a cluster
    assert oracles.verify_cluster(g, range(6), 0)


def test_verify_cluster_straddling_cut():
    g = MultiGraph.from_edge_list(barbell_edges(5))
    # whole barbell: the bridge cut has 5 regular vertices on each side
    assert not oracles.verify_cluster(g, range(10), 1)
    # one clique: every <=1 cut keeps it on one side (bridge cut leaves
    # zero of its vertices on the far side)
    assert oracles.verify_cluster(g, range(5), 1)


def test_enumerate_small_cuts_barbell():
    g = MultiGraph.from_edge_list(barbell_edges(5))
    cuts = oracles.enumerate_small_cuts(g, 1)
    assert len(cuts) == 1
    side, b = cuts[0]
    assert b == 1 and side == frozenset(range(5, 10))


def test_enumerate_min_cuts_nontrivial():
    g = MultiGraph.from_edge_list(barbell_edges(4, b=2))
    lam, _ = oracles.exact_edge_connectivity(g)
    assert lam == 2
    cuts = oracles.enumerate_min_cuts(g, lam)
    assert frozenset(range(4, 8)) in cuts
