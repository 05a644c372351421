"""Exact structural analysis of small graphs.

Densities and balancedness are computed with exact rationals; subgraph and
automorphism counts are exact integers from backtracking searches.  Two
independent routes exist for the maximum subgraph density: an exhaustive
subset scan (small graphs, also the test oracle) and an exact parametric
max-flow search (larger graphs).

Reduction recorded here because it is used silently everywhere: for a fixed
vertex set the induced subgraph has the most edges, hence the largest
density, so balance and strict-balance checks only need induced subgraphs.
Edge-deleted subgraphs on the full vertex set are likewise dominated: they
have strictly fewer edges over the same vertex count.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .errors import DomainError, ResourceLimitError
from .graphs import Graph

_SUBSET_SCAN_LIMIT = 20


def density(g: Graph) -> Fraction:
    """Edge/vertex ratio e(G)/v(G) in lowest terms."""
    if g.vertex_count < 1:
        raise DomainError("density undefined for the empty graph")
    return Fraction(g.edge_count, g.vertex_count)


def _iter_subset_edge_counts(g: Graph) -> Iterator[tuple[int, int]]:
    """Yield (vertex mask, edge count) for every nonempty vertex subset.

    Incremental DP: e(mask) = e(mask minus low bit) + |N(low) & rest|.
    Memory is one int per mask, so callers must respect _SUBSET_SCAN_LIMIT.
    """
    n = g.vertex_count
    masks = g.adjacency_masks
    counts = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        counts[mask] = counts[rest] + (masks[low.bit_length() - 1] & rest).bit_count()
        yield mask, counts[mask]


def _max_density_subsets(g: Graph) -> Fraction:
    best_e, best_v = 0, 1
    for mask, e in _iter_subset_edge_counts(g):
        v = mask.bit_count()
        if e * best_v > best_e * v:
            best_e, best_v = e, v
    return Fraction(best_e, best_v)


class _Dinic:
    """Max-flow on integer capacities (exact, arbitrary-precision)."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * self.n
        self.level[s] = 0
        queue = [s]
        for v in queue:
            for e in self.head[v]:
                if self.cap[e] > 0 and self.level[self.to[e]] < 0:
                    self.level[self.to[e]] = self.level[v] + 1
                    queue.append(self.to[e])
        return self.level[t] >= 0

    def _dfs(self, v: int, t: int, f: int) -> int:
        if v == t:
            return f
        while self.it[v] < len(self.head[v]):
            e = self.head[v][self.it[v]]
            w = self.to[e]
            if self.cap[e] > 0 and self.level[w] == self.level[v] + 1:
                d = self._dfs(w, t, min(f, self.cap[e]))
                if d > 0:
                    self.cap[e] -= d
                    self.cap[e ^ 1] += d
                    return d
            self.it[v] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while self._bfs(s, t):
            self.it = [0] * self.n
            while True:
                f = self._dfs(s, t, 1 << 300)
                if f == 0:
                    break
                flow += f
        return flow

    def source_side(self, s: int) -> set[int]:
        """Residual-reachable nodes after max_flow: the min-cut source side."""
        seen = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for e in self.head[v]:
                if self.cap[e] > 0 and self.to[e] not in seen:
                    seen.add(self.to[e])
                    stack.append(self.to[e])
        return seen


def _best_subset_for_guess(g: Graph, guess: Fraction) -> tuple[int, set[int]]:
    """Maximize b*e(S) - a*|S| over vertex sets S, for guess = a/b.

    Goldberg construction: source -> edge-node (cap b), edge-node -> both
    endpoints (cap inf), vertex -> sink (cap a).  The min cut equals
    b*m - max_S (b*e(S) - a*|S|) and the residual source side carries S.
    """
    n, m = g.vertex_count, g.edge_count
    a, b = guess.numerator, guess.denominator
    source, sink = n + m, n + m + 1
    inf = b * m + a * n + 1
    net = _Dinic(n + m + 2)
    for i, (u, v) in enumerate(sorted(g.edges)):
        net.add(source, n + i, b)
        net.add(n + i, u, inf)
        net.add(n + i, v, inf)
    for v in range(n):
        net.add(v, sink, a)
    cut = net.max_flow(source, sink)
    subset = {v for v in net.source_side(source) if v < n}
    return b * m - cut, subset


def _max_density_flow(g: Graph) -> Fraction:
    """Exact densest subgraph by Dinkelbach iteration over min cuts.

    Each round either certifies the current guess as the maximum density or
    finds a strictly denser subset; densities live in a finite set, so the
    loop terminates.
    """
    if g.edge_count == 0:
        return Fraction(0)
    guess = density(g)
    while True:
        value, subset = _best_subset_for_guess(g, guess)
        if value <= 0 or not subset:
            return guess
        guess = Fraction(g.edge_count_within(subset), len(subset))


def max_subgraph_density(g: Graph, method: str = "auto") -> Fraction:
    """Exact max of e(H)/v(H) over nonempty subgraphs H of G.

    method: "auto" picks "subsets" for v <= 20 and "flow" above; both are
    exact and must agree (asserted by the acceptance suite).
    """
    if g.vertex_count < 1:
        raise DomainError("max_subgraph_density undefined for the empty graph")
    if method == "auto":
        method = "subsets" if g.vertex_count <= _SUBSET_SCAN_LIMIT else "flow"
    if method == "subsets":
        if g.vertex_count > _SUBSET_SCAN_LIMIT:
            raise ResourceLimitError(
                f"subset scan capped at {_SUBSET_SCAN_LIMIT} vertices")
        return _max_density_subsets(g)
    if method == "flow":
        return _max_density_flow(g)
    raise DomainError(f"unknown method {method!r}")


def is_balanced(g: Graph) -> bool:
    """No subgraph exceeds the graph's own density."""
    return max_subgraph_density(g) == density(g)


def is_strictly_balanced(g: Graph, max_vertices: int = _SUBSET_SCAN_LIMIT) -> bool:
    """Every proper subgraph is strictly less dense than the graph.

    Only induced subgraphs on nonempty proper vertex subsets are enumerated;
    all other proper subgraphs are dominated (see module docstring).
    """
    if g.vertex_count < 2:
        raise DomainError("strict balance needs at least 2 vertices")
    if g.vertex_count > max_vertices:
        raise ResourceLimitError(
            f"strict-balance scan capped at {max_vertices} vertices")
    rho_e, rho_v = g.edge_count, g.vertex_count
    full = (1 << rho_v) - 1
    for mask, e in _iter_subset_edge_counts(g):
        if mask == full:
            continue
        # proper subset fails if e/|S| >= e(G)/v(G)
        if e * rho_v >= rho_e * mask.bit_count():
            return False
    return True


# ---- automorphisms ----------------------------------------------------------

def automorphisms(g: Graph, cap: int = 32) -> Iterator[tuple[int, ...]]:
    """Yield all automorphisms as vertex maps (tuples), identity included.

    Backtracking over images with degree-partition pruning; adjacency
    consistency with already-placed vertices is checked via bitmasks.
    """
    n = g.vertex_count
    if n > cap:
        raise ResourceLimitError(f"automorphism search capped at {cap} vertices")
    if n == 0:
        yield ()
        return
    masks = g.adjacency_masks
    degrees = [m.bit_count() for m in masks]
    # most-constrained-first: rare degree classes early
    degree_freq = {d: degrees.count(d) for d in set(degrees)}
    order = sorted(range(n), key=lambda v: (degree_freq[degrees[v]], -degrees[v], v))
    image = [-1] * n
    used = [False] * n

    def place(pos: int) -> Iterator[tuple[int, ...]]:
        if pos == n:
            yield tuple(image)
            return
        v = order[pos]
        for w in range(n):
            if used[w] or degrees[w] != degrees[v]:
                continue
            ok = True
            for u in order[:pos]:
                if ((masks[v] >> u) & 1) != ((masks[w] >> image[u]) & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                yield from place(pos + 1)
                used[w] = False
                image[v] = -1

    yield from place(0)


def automorphism_count(g: Graph, cap: int = 32) -> int:
    """Exact |Aut(G)|."""
    return sum(1 for _ in automorphisms(g, cap=cap))


# ---- subgraph copies --------------------------------------------------------

def _pattern_order(pattern: Graph) -> list[int]:
    """Vertex order where each vertex (after the first of a component) has a
    neighbor among its predecessors; components entered by degree."""
    remaining = set(range(pattern.vertex_count))
    order: list[int] = []
    placed: set[int] = set()
    while remaining:
        attached = [v for v in remaining if pattern.adjacency[v] & placed]
        if attached:
            v = max(attached, key=lambda u: (len(pattern.adjacency[u] & placed),
                                             pattern.degree(u), -u))
        else:
            v = max(remaining, key=lambda u: (pattern.degree(u), -u))
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def _iter_injective_embeddings(host: Graph, pattern: Graph,
                               order: list[int]) -> Iterator[dict[int, int]]:
    """All injective maps pattern -> host sending pattern edges to host edges
    (edge-subset semantics: pattern non-edges are unconstrained)."""
    image: dict[int, int] = {}
    used: set[int] = set()

    def place(pos: int) -> Iterator[dict[int, int]]:
        if pos == len(order):
            yield dict(image)
            return
        v = order[pos]
        mapped_neighbors = [image[u] for u in pattern.adjacency[v] if u in image]
        if mapped_neighbors:
            candidates = set(host.adjacency[mapped_neighbors[0]])
            for w in mapped_neighbors[1:]:
                candidates &= host.adjacency[w]
        else:
            candidates = set(host.vertices())
        dv = pattern.degree(v)
        for c in sorted(candidates):
            if c in used or host.degree(c) < dv:
                continue
            image[v] = c
            used.add(c)
            yield from place(pos + 1)
            used.remove(c)
            del image[v]

    yield from place(0)


def count_injective_embeddings(host: Graph, pattern: Graph,
                               max_pattern_vertices: int = 10) -> int:
    """Number of injective adjacency-preserving maps pattern -> host."""
    _check_pattern(pattern, max_pattern_vertices)
    return sum(1 for _ in _iter_injective_embeddings(host, pattern,
                                                     _pattern_order(pattern)))


def count_subgraph_copies(host: Graph, pattern: Graph,
                          max_pattern_vertices: int = 10) -> int:
    """Number of subgraphs of host isomorphic to pattern (not necessarily
    induced); equals injective embeddings divided by |Aut(pattern)|."""
    _check_pattern(pattern, max_pattern_vertices)
    embeddings = count_injective_embeddings(host, pattern, max_pattern_vertices)
    aut = automorphism_count(pattern)
    assert embeddings % aut == 0
    return embeddings // aut


def has_subgraph_copy(host: Graph, pattern: Graph,
                      max_pattern_vertices: int = 10) -> bool:
    """Short-circuiting copy test: true iff at least one copy exists."""
    _check_pattern(pattern, max_pattern_vertices)
    if pattern.vertex_count > host.vertex_count:
        return False
    for _ in _iter_injective_embeddings(host, pattern, _pattern_order(pattern)):
        return True
    return False


def _check_pattern(pattern: Graph, cap: int) -> None:
    if pattern.vertex_count < 1:
        raise DomainError("pattern must have at least one vertex")
    if pattern.vertex_count > cap:
        raise ResourceLimitError(f"pattern search capped at {cap} vertices")


# ---- isomorphism (small graphs) ---------------------------------------------

def are_isomorphic(g: Graph, h: Graph, cap: int = 10) -> bool:
    """Exact isomorphism test for desk-scale graphs."""
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    if g.vertex_count > cap:
        raise ResourceLimitError(f"isomorphism test capped at {cap} vertices")
    if sorted(g.degree(v) for v in g.vertices()) != \
            sorted(h.degree(v) for v in h.vertices()):
        return False
    if g.vertex_count == 0:
        return True
    # embed g into h injectively requiring the edge biconditional
    masks_g, masks_h = g.adjacency_masks, h.adjacency_masks
    n = g.vertex_count
    order = _pattern_order(g)
    image = [-1] * n
    used = [False] * n

    def place(pos: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        for w in range(n):
            if used[w] or g.degree(v) != h.degree(w):
                continue
            if all(((masks_g[v] >> u) & 1) == ((masks_h[w] >> image[u]) & 1)
                   for u in order[:pos]):
                image[v] = w
                used[w] = True
                if place(pos + 1):
                    return True
                used[w] = False
                image[v] = -1
        return False

    return place(0)
