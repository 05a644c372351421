"""Rooted-pair calculus: f_alpha, alpha-safe pairs, exact extensions,
(K,T)-maximality, chain certificates, and the bounded local-sparsity check.

A RootedPair (G, H) is a graph G together with an ordered tuple of root
vertices; H is the induced restriction of G to the roots.  The pair excess
counts v(G,H) = vertices outside the roots and e(G,H) = edges not inside the
root set, and f_alpha(G,H) = v - alpha*e.

Monotonicity reduction used by is_alpha_safe (proof sketch): f_alpha is
decreasing in the edge count at fixed vertex set, so over all intermediate
graphs S on a fixed vertex set the minimum of f_alpha is attained by the
induced (edge-maximal) S.  Checking f_alpha > 0 on induced subgraphs only is
therefore exact, including the strict inequality: sparser S on the same
vertices have strictly larger f_alpha.  Vertex sets equal to the root set
cannot occur since H is induced, so every intermediate S adds a vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .analysis import max_subgraph_density
from .errors import DomainError, ResourceLimitError, ValidationError
from .graphs import Graph, format_graph, parse_graph


@dataclass(frozen=True)
class RootedPair:
    """A graph with designated root vertices (the H-part of the pair)."""

    big: Graph
    roots: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.roots)) != len(self.roots):
            raise DomainError("roots must be distinct")
        for r in self.roots:
            if not 0 <= r < self.big.vertex_count:
                raise DomainError(f"root {r} out of range")

    @property
    def small(self) -> Graph:
        """Induced restriction of big to the roots."""
        return self.big.induced(self.roots)

    def non_roots(self) -> list[int]:
        root_set = set(self.roots)
        return [v for v in self.big.vertices() if v not in root_set]


def format_rooted_pair(pair: RootedPair) -> str:
    """Edge-list text of the graph followed by a 'roots:' line."""
    return format_graph(pair.big) + "roots: " + \
        " ".join(str(r) for r in pair.roots) + "\n"


def parse_rooted_pair(text: str) -> RootedPair:
    """Inverse of format_rooted_pair; the roots line may be absent (no roots)."""
    lines = text.splitlines()
    roots: tuple[int, ...] = ()
    graph_lines = []
    for line in lines:
        stripped = line.strip()
        if stripped.startswith("roots:"):
            fields = stripped[len("roots:"):].split()
            try:
                roots = tuple(int(f) for f in fields)
            except ValueError:
                raise ValidationError(f"bad roots line: {stripped!r}") from None
        else:
            graph_lines.append(line)
    return RootedPair(parse_graph("\n".join(graph_lines)), roots)


def pair_stats(pair: RootedPair) -> tuple[int, int]:
    """(v, e): vertices outside the roots, edges not inside the root set."""
    root_set = set(pair.roots)
    v = pair.big.vertex_count - len(root_set)
    e = sum(1 for a, b in pair.big.edges
            if a not in root_set or b not in root_set)
    return v, e


def f_alpha(pair: RootedPair, alpha: Fraction) -> Fraction:
    """f_alpha(G, H) = v(G,H) - alpha * e(G,H), exactly."""
    if alpha <= 0:
        raise DomainError("need alpha > 0")
    v, e = pair_stats(pair)
    return Fraction(v) - alpha * e


def is_alpha_safe(pair: RootedPair, alpha: Fraction,
                  max_vertices: int = 14) -> bool:
    """True iff f_alpha(S, H) > 0 for every S with H strictly between H and G.

    Enumerates vertex subsets strictly containing the roots; the induced
    (edge-maximal) S per subset suffices by the monotonicity reduction in the
    module docstring.  Vacuously true when the roots cover the whole graph.
    """
    if alpha <= 0:
        raise DomainError("need alpha > 0")
    g = pair.big
    if g.vertex_count > max_vertices:
        raise ResourceLimitError(f"alpha-safe scan capped at {max_vertices} vertices")
    free = pair.non_roots()
    masks = g.adjacency_masks
    root_mask = 0
    for r in pair.roots:
        root_mask |= 1 << r
    # edges added when vertex v joins the current set (roots | chosen)
    a, b = alpha.numerator, alpha.denominator
    extra = len(free)
    # DP over subsets of the free vertices; e(mask) counts edges with at
    # least one endpoint outside the roots
    e_count = [0] * (1 << extra)
    for mask in range(1, 1 << extra):
        low_index = (mask & -mask).bit_length() - 1
        rest = mask ^ (mask & -mask)
        chosen_mask = root_mask
        for j in range(extra):
            if rest >> j & 1:
                chosen_mask |= 1 << free[j]
        v = free[low_index]
        e_count[mask] = e_count[rest] + (masks[v] & chosen_mask).bit_count()
        # f = |mask| - alpha * e  > 0   <=>   b*|mask| > a*e
        if b * mask.bit_count() <= a * e_count[mask]:
            return False
    return True


# ---- exact extensions -------------------------------------------------------

def _constrained_order(template: RootedPair) -> list[int]:
    """Free template vertices, those adjacent to roots or earlier picks first."""
    placed = set(template.roots)
    remaining = set(template.non_roots())
    order: list[int] = []
    while remaining:
        attached = [v for v in remaining if template.big.adjacency[v] & placed]
        v = min(attached) if attached else min(remaining)
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def iter_exact_extensions(host: Graph, template: RootedPair,
                          anchors: Sequence[int],
                          allowed: Iterable[int] | None = None):
    """Yield raw embeddings (dict template-vertex -> host-vertex) of exact
    (G, H)-extensions of the anchors inside the host.

    Template pairs not inside the root set must map edge-to-edge and
    non-edge-to-non-edge; pairs inside the anchor set are unconstrained.
    New vertices are drawn from `allowed` (default: all non-anchor host
    vertices) and are distinct from the anchors and from each other.
    """
    roots = template.roots
    if len(anchors) != len(roots):
        raise DomainError("anchor count must match template root count")
    if len(set(anchors)) != len(anchors):
        raise DomainError("anchors must be distinct")
    for v in anchors:
        if not 0 <= v < host.vertex_count:
            raise DomainError(f"anchor {v} out of range")
    anchor_set = set(anchors)
    pool = set(allowed) if allowed is not None else set(host.vertices())
    pool -= anchor_set

    image: dict[int, int] = dict(zip(roots, anchors))
    used: set[int] = set()
    order = _constrained_order(template)

    def consistent(v: int, c: int) -> bool:
        # v is always a free vertex, so every placed pair (u, v) is outside
        # the root part and carries the edge/non-edge biconditional
        return all(template.big.has_edge(u, v) == host.has_edge(w, c)
                   for u, w in image.items())

    def place(pos: int):
        if pos == len(order):
            yield dict(image)
            return
        v = order[pos]
        for c in sorted(pool - used):
            if consistent(v, c):
                image[v] = c
                used.add(c)
                yield from place(pos + 1)
                used.remove(c)
                del image[v]

    yield from place(0)


def find_exact_extensions(host: Graph, template: RootedPair,
                          anchors: Sequence[int],
                          allowed: Iterable[int] | None = None
                          ) -> list[tuple[int, ...]]:
    """All exact (G, H)-extensions of the anchors, as new-vertex embeddings.

    Each embedding is a tuple of host vertices aligned with the template's
    non-root vertices in ascending template order.  Embeddings are
    deduplicated by their new-vertex set (template automorphisms over the
    roots would otherwise repeat the same extension subgraph); the
    lexicographically smallest witness tuple is kept.
    """
    free = sorted(template.non_roots())
    best: dict[frozenset[int], tuple[int, ...]] = {}
    for image in iter_exact_extensions(host, template, anchors, allowed):
        emb = tuple(image[v] for v in free)
        key = frozenset(emb)
        if key not in best or emb < best[key]:
            best[key] = emb
    return sorted(best.values())


def has_exact_extension(host: Graph, template: RootedPair,
                        anchors: Sequence[int],
                        allowed: Iterable[int] | None = None) -> bool:
    for _ in iter_exact_extensions(host, template, anchors, allowed):
        return True
    return False


# ---- (K, T)-maximality ------------------------------------------------------

@dataclass(frozen=True)
class EmbeddedPair:
    """A pair (G~, H~) given by its vertex sets inside a host graph."""

    g_vertices: tuple[int, ...]
    h_vertices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.g_vertices)) != len(self.g_vertices):
            raise DomainError("g_vertices must be distinct")
        if not set(self.h_vertices) <= set(self.g_vertices):
            raise DomainError("h_vertices must be contained in g_vertices")


def is_kt_maximal(host: Graph, pair: EmbeddedPair, kt: RootedPair) -> bool:
    """(K, T)-maximality of (G~, H~) in the host, by the literal definition.

    For every candidate root set T~ inside G~ of size |T| that is not fully
    inside H~, and for every assignment of T's roots onto T~, there must be
    no exact (K, T)-extension whose new vertices avoid G~ entirely and have
    no host edges into G~ \\ T~.
    """
    g_set = set(pair.g_vertices)
    h_set = set(pair.h_vertices)
    t_size = len(kt.roots)
    if t_size > len(g_set):
        return True  # no candidate T~ exists
    memo: dict[tuple[tuple[int, ...], frozenset[int]], bool] = {}
    for t_choice in combinations(sorted(g_set), t_size):
        if set(t_choice) <= h_set:
            continue
        outside = g_set - set(t_choice)
        allowed = [v for v in host.vertices()
                   if v not in g_set and not (host.adjacency[v] & outside)]
        allowed_key = frozenset(allowed)
        for anchors in permutations(t_choice):
            key = (anchors, allowed_key)
            if key not in memo:
                memo[key] = has_exact_extension(host, kt, anchors, allowed)
            if memo[key]:
                return False
    return True


# ---- chain certificates -----------------------------------------------------

@dataclass(frozen=True)
class ChainCertificate:
    """Tower T~ = K^0 c K^1 c ... c K^r with optional per-step family indices.

    Tower graphs live on nested prefix vertex sets: K^(j-1) occupies vertices
    0..v_(j-1)-1 of K^j and its edges are a subset of K^j's edges.
    """

    tower: tuple[Graph, ...]
    steps: tuple[int, ...] | None = None

    def to_json(self) -> str:
        doc = {"tower": [format_graph(g) for g in self.tower],
               "steps": list(self.steps) if self.steps is not None else None}
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ChainCertificate":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"certificate is not valid JSON: {exc}") from None
        if not isinstance(doc, dict) or "tower" not in doc:
            raise ValidationError("certificate must be an object with a 'tower'")
        tower = tuple(parse_graph(t) for t in doc["tower"])
        steps = doc.get("steps")
        return cls(tower, tuple(steps) if steps is not None else None)


@dataclass(frozen=True)
class StepReport:
    index: int
    v: int
    e: int
    matched_pair: int | None
    inequality_ok: bool | None


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    steps: tuple[StepReport, ...]

    def __bool__(self) -> bool:
        return self.ok

    @property
    def all_inequalities_hold(self) -> bool:
        return all(s.inequality_ok for s in self.steps
                   if s.inequality_ok is not None)


def step_inequality(v: int, e: int, alpha_minus_eps: Fraction) -> bool:
    """The per-step growth inequality e_j > v_j / (alpha - eps), exactly."""
    if alpha_minus_eps <= 0:
        raise DomainError("need alpha - eps > 0")
    return Fraction(e) > Fraction(v) / alpha_minus_eps


def _check_tower(tower: Sequence[Graph]) -> None:
    if len(tower) < 2:
        raise ValidationError("tower must contain K^0 and at least one step (r >= 1)")
    for j in range(1, len(tower)):
        prev, cur = tower[j - 1], tower[j]
        if prev.vertex_count > cur.vertex_count:
            raise ValidationError(f"step {j}: vertex set shrinks")
        if not prev.edges <= cur.edges:
            raise ValidationError(f"step {j}: edges of K^{j - 1} not kept")
        if prev.vertex_count == cur.vertex_count and prev.edges == cur.edges:
            raise ValidationError(f"step {j}: no growth (nesting must be strict)")


def _is_extension_step(prev: Graph, cur: Graph, kt: RootedPair) -> bool:
    """Is cur a (K, T)-extension of prev?

    Requires a bijection of T onto prev's vertices and of K's free vertices
    onto the new vertices mapping every template edge outside T onto an edge
    of cur outside prev.  Since T is induced in K, all constrained template
    edges touch a free vertex, so the condition reduces to cur-adjacency.
    """
    if len(kt.roots) != prev.vertex_count:
        return False
    free = sorted(kt.non_roots())
    new_vertices = list(range(prev.vertex_count, cur.vertex_count))
    if len(free) != len(new_vertices):
        return False

    root_list = list(kt.roots)

    def roots_assignable(image: dict[int, int]) -> bool:
        # match each root to a distinct prev vertex meeting its required
        # adjacencies to the placed free images; unconstrained roots always fit
        requirements = []
        for r in root_list:
            req = [image[u] for u in kt.big.adjacency[r] if u in image]
            if req:
                requirements.append(set(req))
        candidates = [set(w for w in range(prev.vertex_count)
                          if all(cur.has_edge(w, x) for x in req))
                      for req in requirements]

        taken: set[int] = set()

        def match(i: int) -> bool:
            if i == len(candidates):
                return True
            for w in sorted(candidates[i] - taken):
                taken.add(w)
                if match(i + 1):
                    return True
                taken.remove(w)
            return False

        return match(0)

    image: dict[int, int] = {}
    used: set[int] = set()

    def place(pos: int) -> bool:
        if pos == len(free):
            return roots_assignable(image)
        v = free[pos]
        for c in new_vertices:
            if c in used:
                continue
            if all(cur.has_edge(image[u], c)
                   for u in kt.big.adjacency[v] if u in image):
                image[v] = c
                used.add(c)
                if place(pos + 1):
                    return True
                used.remove(c)
                del image[v]
        return False

    return place(0)


def verify_chain(cert: ChainCertificate, family: Sequence[RootedPair],
                 alpha_minus_eps: Fraction | None = None) -> ChainReport:
    """Check that every tower step is a (K, T)-extension by a family member.

    When the certificate names per-step pair indices only those are tried;
    otherwise every family member is.  With alpha_minus_eps given, each
    step's growth inequality e_j > v_j/(alpha-eps) is reported as well (it
    does not affect the boolean verdict).  The report is truthy iff every
    step matched.
    """
    _check_tower(cert.tower)
    if cert.steps is not None and len(cert.steps) != len(cert.tower) - 1:
        raise ValidationError("steps list must name one pair per tower step")
    reports: list[StepReport] = []
    ok = True
    for j in range(1, len(cert.tower)):
        prev, cur = cert.tower[j - 1], cert.tower[j]
        v = cur.vertex_count - prev.vertex_count
        e = cur.edge_count - prev.edge_count
        if cert.steps is not None:
            idx = cert.steps[j - 1]
            if not 0 <= idx < len(family):
                raise ValidationError(f"step {j}: pair index {idx} out of range")
            candidates = [idx]
        else:
            candidates = list(range(len(family)))
        matched = None
        for idx in candidates:
            if _is_extension_step(prev, cur, family[idx]):
                matched = idx
                break
        if matched is None:
            ok = False
        ineq = None
        if alpha_minus_eps is not None:
            ineq = step_inequality(v, e, alpha_minus_eps)
        reports.append(StepReport(j, v, e, matched, ineq))
    return ChainReport(ok, tuple(reports))


# ---- bounded local sparsity (class-S property 1) ------------------------------

def check_property_s1(g: Graph, q: Fraction | int, alpha_minus_eps: Fraction,
                      max_q: int = 16) -> bool:
    """True iff no subgraph on at most floor(q) vertices has density above
    1/(alpha - eps).

    A violating subgraph contains a connected induced violator of no more
    vertices (induced subgraphs dominate density per vertex set, and the
    densest component of a graph is at least as dense as the whole), so the
    scan enumerates connected induced subgraphs only, each exactly once.
    A global max-density check short-circuits hosts that are everywhere
    sparse.
    """
    if alpha_minus_eps <= 0:
        raise DomainError("need alpha - eps > 0")
    limit = int(q)  # floor for non-negative q
    if limit > max_q:
        raise ResourceLimitError(f"subgraph-size bound {limit} exceeds cap {max_q}")
    if limit < 1 or g.vertex_count == 0:
        return True
    theta = 1 / Fraction(alpha_minus_eps)
    num, den = theta.numerator, theta.denominator
    if max_subgraph_density(g) <= theta:
        return True
    if limit >= g.vertex_count:
        return False  # the global witness already fits the size bound

    adjacency = g.adjacency

    def dense(e: int, v: int) -> bool:
        return e * den > num * v

    # Wernicke-style enumeration: each connected set with a fixed minimum
    # vertex (the root) appears exactly once.
    def extend(subset: set[int], extension: list[int], root: int,
               e: int) -> bool:
        if dense(e, len(subset)):
            return True
        if len(subset) == limit:
            return False
        ext = list(extension)
        while ext:
            w = ext.pop()
            new_ext = ext + [u for u in adjacency[w]
                             if u > root and u not in subset
                             and not any(u in adjacency[x] for x in subset)]
            gained = len(adjacency[w] & subset)
            subset.add(w)
            if extend(subset, new_ext, root, e + gained):
                return True
            subset.remove(w)
        return False

    for root in range(g.vertex_count):
        start_ext = [u for u in adjacency[root] if u > root]
        if extend({root}, start_ext, root, 0):
            return False
    return True
