import random

import pytest

from rectmm.catalog import canonical_catalog, load_catalog


@pytest.fixture(scope="session")
def catalog():
    return {alg.name: alg for alg in canonical_catalog()}


@pytest.fixture(scope="session")
def hk323():
    return load_catalog("hk-323")


@pytest.fixture(scope="session")
def bini322():
    return load_catalog("bini-322-encA")


def random_connected_graph(rng: random.Random, n: int, extra_edges: int):
    """Random spanning tree plus extra edges; returns an edge list."""
    edges = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        edges.append((order[i], order[rng.randrange(i)]))
    for _ in range(extra_edges):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v))
    return edges
