"""Finite simple undirected graphs with labeled vertices.

The Graph type is the universal carrier for the whole package: immutable,
hashable, vertices are 0..vertex_count-1, edges are unordered pairs with no
loops.  The text format ("v e" header, then one "a b" line per edge, '#'
comments allowed) round-trips bit-exactly: the serializer emits edges in
lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError, GraphParseError

Edge = tuple[int, int]


def _normalize_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset[Edge] = field(default_factory=frozenset)
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise DomainError("vertex_count must be non-negative")
        for a, b in self.edges:
            if a == b:
                raise DomainError(f"loop at vertex {a}")
            if not (a < b):
                raise DomainError(f"edge {(a, b)} not normalized (need a < b)")
            if not (0 <= a and b < self.vertex_count):
                raise DomainError(f"edge {(a, b)} out of range")
        if self.labels is not None and len(self.labels) != self.vertex_count:
            raise DomainError("labels length must equal vertex_count")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph, normalizing each pair to (min, max)."""
        normalized = frozenset(_normalize_edge(a, b) for a, b in edges)
        return cls(vertex_count, normalized,
                   tuple(labels) if labels is not None else None)

    def __repr__(self) -> str:
        shown = sorted(self.edges)
        if len(shown) > 12:
            edge_text = f"{shown[:12]}... ({len(shown)} edges)"
        else:
            edge_text = str(shown)
        return f"Graph(v={self.vertex_count}, edges={edge_text})"

    # ---- basic accessors --------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """Neighbor sets, indexed by vertex."""
        neigh: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for a, b in self.edges:
            neigh[a].add(b)
            neigh[b].add(a)
        return tuple(frozenset(s) for s in neigh)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Neighbor sets as bitmasks; the workhorse of the exact scanners."""
        masks = [0] * self.vertex_count
        for a, b in self.edges:
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        return tuple(masks)

    def has_edge(self, a: int, b: int) -> bool:
        return _normalize_edge(a, b) in self.edges if a != b else False

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertices(self) -> range:
        return range(self.vertex_count)

    # ---- subgraph helpers -------------------------------------------------

    def edge_count_within(self, vertices: Iterable[int]) -> int:
        """Number of edges with both endpoints in `vertices`."""
        vs = set(vertices)
        return sum(1 for a, b in self.edges if a in vs and b in vs)

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph; vertices are relabeled 0.. in sorted order."""
        ordered = sorted(set(vertices))
        index = {v: i for i, v in enumerate(ordered)}
        if any(not (0 <= v < self.vertex_count) for v in ordered):
            raise DomainError("induced(): vertex out of range")
        edges = frozenset((index[a], index[b]) for a, b in self.edges
                          if a in index and b in index)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[v] for v in ordered)
        return Graph(len(ordered), edges, labels)

    def is_connected(self) -> bool:
        if self.vertex_count <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertex_count


# ---- constructors ----------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    """Path on n vertices (n - 1 edges)."""
    if n < 1:
        raise DomainError("path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


# ---- edge-list text format --------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: "v e" header, then e lines "a b".

    '#' starts a comment (whole line or trailing).  Raises GraphParseError
    with the offending 1-based line number on malformed lines, out-of-range
    endpoints, loops, duplicate edges, or an edge-count mismatch.
    """
    payload: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            payload.append((lineno, stripped.split()))

    if not payload:
        raise GraphParseError("missing 'v e' header", 1)

    header_line, header = payload[0]
    if len(header) != 2:
        raise GraphParseError("header must be 'v e'", header_line)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError("header must contain two integers", header_line) from None
    if n < 0 or m < 0:
        raise GraphParseError("negative count in header", header_line)

    edges: set[Edge] = set()
    for lineno, parts in payload[1:]:
        if len(parts) != 2:
            raise GraphParseError("edge line must be 'a b'", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("edge endpoints must be integers", lineno) from None
        if not (0 <= a < n and 0 <= b < n):
            raise GraphParseError(f"endpoint out of range 0..{n - 1}", lineno)
        if a == b:
            raise GraphParseError(f"loop at vertex {a}", lineno)
        edge = _normalize_edge(a, b)
        if edge in edges:
            raise GraphParseError(f"duplicate edge {edge[0]} {edge[1]}", lineno)
        edges.add(edge)

    if len(edges) != m:
        last = payload[-1][0]
        raise GraphParseError(f"header declares {m} edges, found {len(edges)}", last)
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    """Serialize to the edge-list format; inverse of parse_graph."""
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{a} {b}" for a, b in sorted(g.edges))
    return "\n".join(lines) + "\n"
