"""Generators for clique-chain graphs and strictly balanced graphs.

An m-chain of length d is d copies of K_m glued along a path of "nodal"
vertices, consecutive cliques sharing exactly one nodal vertex; an m-cycle
closes that path into a cycle.  The figure-eight graph joins two m-cycles at
a single shared nodal vertex.

Vertex numbering convention (deterministic serialization for golden tests):
clique i contributes its new vertices consecutively, private vertices first,
so shared nodal vertices always carry the lower index.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .analysis import is_strictly_balanced
from .errors import DomainError, ResourceLimitError
from .graphs import Graph

_VERTEX_CAP = 1_000_000


class MChain(NamedTuple):
    graph: Graph
    ends: tuple[int, int]


def _clique_edges(vertices: list[int]) -> list[tuple[int, int]]:
    return [(a, b) for a, b in combinations(vertices, 2)]


def make_m_chain(m: int, d: int) -> MChain:
    """Simple m-chain of length d; ends are the nodal path endpoints.

    Nodal vertices are 0, m-1, 2(m-1), ..., d(m-1); clique i spans nodal
    vertices (i-1)(m-1) and i(m-1) plus m-2 private vertices in between.
    """
    if m < 2:
        raise DomainError("need m >= 2")
    if d < 1:
        raise DomainError("need d >= 1")
    n = d * (m - 1) + 1
    if n > _VERTEX_CAP:
        raise ResourceLimitError(f"chain would have {n} vertices")
    edges: list[tuple[int, int]] = []
    for i in range(d):
        lo, hi = i * (m - 1), (i + 1) * (m - 1)
        edges.extend(_clique_edges(list(range(lo, hi + 1))))
    return MChain(Graph.from_edges(n, edges), (0, n - 1))


def make_m_cycle(m: int, d: int) -> Graph:
    """m-cycle of length d: d cliques K_m on a d-cycle of nodal vertices.

    v = d(m-1), e = d*m(m-1)/2, density exactly m/2.
    """
    if m < 2:
        raise DomainError("need m >= 2")
    if d < 3:
        raise DomainError("need d >= 3")
    n = d * (m - 1)
    if n > _VERTEX_CAP:
        raise ResourceLimitError(f"cycle would have {n} vertices")
    edges: list[tuple[int, int]] = []
    for i in range(d):
        lo = i * (m - 1)
        if i < d - 1:
            clique = list(range(lo, lo + m))
        else:
            # closing clique: last nodal block plus the starting nodal vertex
            clique = list(range(lo, lo + m - 1)) + [0]
        edges.extend(_clique_edges(clique))
    return Graph.from_edges(n, edges)


def make_figure_eight(m: int, l1: int, l2: int) -> Graph:
    """Two m-cycles of lengths l1 and l2 sharing exactly one nodal vertex.

    v = (l1+l2)(m-1) - 1 and e = (l1+l2)*m(m-1)/2; the density equals
    1 / (2/m - 2/((l1+l2) m (m-1))) exactly.
    """
    if m < 2:
        raise DomainError("need m >= 2")
    if l1 < 3 or l2 < 3:
        raise DomainError("need l1, l2 >= 3")
    first = make_m_cycle(m, l1)
    offset = first.vertex_count - 1
    second = make_m_cycle(m, l2)
    # second cycle's nodal vertex 0 is identified with vertex 0 of the first
    def shift(v: int) -> int:
        return 0 if v == 0 else v + offset

    edges = list(first.edges) + [(min(shift(a), shift(b)), max(shift(a), shift(b)))
                                 for a, b in second.edges]
    n = first.vertex_count + second.vertex_count - 1
    return Graph.from_edges(n, edges)


def figure_eight_density(m: int, l1: int, l2: int) -> Fraction:
    """Closed form for density(make_figure_eight(m, l1, l2))."""
    total = l1 + l2
    return Fraction(total * m * (m - 1), 2) / (total * (m - 1) - 1)


def find_strictly_balanced_with_density(target: Fraction,
                                        vmax: int = 12) -> Graph | None:
    """Smallest strictly balanced graph with density exactly `target`.

    Canonical exhaustive search: smallest vertex count first, then
    lexicographic edge sets over the sorted pair list.  Cheap necessary
    filters (connectivity, min degree > density) precede the full
    induced-subgraph scan.  Returns None when nothing fits within vmax.
    """
    if target <= Fraction(1, 2):
        raise DomainError("need target > 1/2")
    if vmax > 12:
        raise DomainError("vmax capped at 12")
    for v in range(2, vmax + 1):
        e_frac = target * v
        if e_frac.denominator != 1:
            continue
        e = int(e_frac)
        if e < v - 1 or e > v * (v - 1) // 2:
            # disconnected graphs are never strictly balanced (their densest
            # component is a proper subgraph at least as dense)
            continue
        pairs = list(combinations(range(v), 2))
        min_degree_needed = int(target) + 1  # strict balance forces deg > rho
        for edge_set in combinations(pairs, e):
            degree = [0] * v
            for a, b in edge_set:
                degree[a] += 1
                degree[b] += 1
            if min(degree) < min_degree_needed:
                continue
            g = Graph(v, frozenset(edge_set))
            if g.is_connected() and is_strictly_balanced(g):
                return g
    return None
