import itertools
from math import comb

import numpy as np
import pytest

from domlab.graph import Graph


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves, center=0):
    others = [v for v in range(leaves + 1) if v != center]
    return Graph(leaves + 1, [(center, v) for v in others])


def all_graphs(n):
    """Every labelled graph on n vertices, as (edge_mask, closed-neighbourhood bitmasks, m)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        closed = [1 << v for v in range(n)]
        m = 0
        for i, (a, b) in enumerate(pairs):
            if mask >> i & 1:
                closed[a] |= 1 << b
                closed[b] |= 1 << a
                m += 1
        yield mask, closed, m


def exhaustive_moments(n, p, r):
    """Exact E(X_r), E(X_r^2) and P(X_r = 0) by summing over all graphs on n vertices."""
    total_pairs = comb(n, 2)
    full = (1 << n) - 1
    subsets = list(itertools.combinations(range(n), r))
    e1 = e2 = p0 = 0.0
    for _, closed, m in all_graphs(n):
        weight = p**m * (1 - p) ** (total_pairs - m)
        x = 0
        for s in subsets:
            cov = 0
            for v in s:
                cov |= closed[v]
            x += cov == full
        e1 += weight * x
        e2 += weight * x * x
        p0 += weight * (x == 0)
    return e1, e2, p0


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
