import random

import pytest

from cutkit.multigraph import MultiGraph


def cycle_edges(n):
    return [(i, (i + 1) % n, 1) for i in range(n)]


def clique_edges(n, offset=0):
    return [(offset + i, offset + j, 1)
            for i in range(n) for j in range(i + 1, n)]


def barbell_edges(q, b=1):
    """Two K_q joined by b disjoint bridge edges."""
    assert b <= q
    edges = clique_edges(q) + clique_edges(q, offset=q)
    edges += [(i, q + i, 1) for i in range(b)]
    return edges


def path_edges(n):
    return [(i, i + 1, 1) for i in range(n - 1)]


@pytest.fixture
def triangle():
    return MultiGraph.from_edge_list([(0, 1, 1), (1, 2, 1), (0, 2, 1)])


@pytest.fixture
def barbell55():
    return MultiGraph.from_edge_list(barbell_edges(5))


def random_connected_graph(rng: random.Random, n, extra_edges=None):
    """Random spanning tree plus extra edges; always simple and connected."""
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a = order[rng.randrange(i)]
        b = order[i]
        edges.add((min(a, b), max(a, b)))
    if extra_edges is None:
        extra_edges = rng.randrange(0, n * (n - 1) // 2 - (n - 1) + 1)
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 10 * n * n:
        a, b = rng.randrange(n), rng.randrange(n)
        attempts += 1
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return MultiGraph.from_edge_list([(u, v, 1) for u, v in sorted(edges)])
