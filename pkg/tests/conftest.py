"""Shared test helpers: seeded random graphs and small-graph enumeration."""

from __future__ import annotations

import random
from itertools import combinations

from zol.analysis import are_isomorphic
from zol.graphs import Graph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def all_labeled_graphs(n: int) -> list[Graph]:
    pairs = list(combinations(range(n), 2))
    out = []
    for mask in range(1 << len(pairs)):
        out.append(Graph.from_edges(
            n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1]))
    return out


def graphs_up_to_iso(max_n: int) -> list[Graph]:
    """All non-isomorphic graphs on 1..max_n vertices."""
    found: list[Graph] = []
    for n in range(1, max_n + 1):
        for g in all_labeled_graphs(n):
            if not any(are_isomorphic(g, h) for h in found
                       if h.vertex_count == n):
                found.append(g)
    return found
