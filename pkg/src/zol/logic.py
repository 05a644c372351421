"""First-order logic over the graph signature (adjacency, equality).

Formulas are immutable ASTs with structural equality.  The concrete syntax
is S-expression style:

    atoms        (= x y)   (adj x y)
    connectives  (not f)   (and f ...)   (or f ...)   (implies f g)
    binders      (exists x f)   (forall x f)

(and) with no parts is the constant true, (or) the constant false.  The
pretty-printer emits canonical single-space form and round-trips through the
parser.

The builders construct the clique/chain formula family used by the k-law
refutation: pairwise-distinctness NI, clique K, max-clique MK, the
chain-splitting recursion D_l, and the assembled sentence of property A.
The evaluator is a naive Tarskian interpreter with short-circuiting and
per-call memoization; it is exponential in quantifier depth by design and
guarded by a visit budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator, Mapping, Sequence

from .errors import (DomainError, FormulaParseError, ResourceLimitError,
                     UnboundVariableError)
from .graphs import Graph

_MK_PERMUTATION_CAP = 4


class Formula:
    """Base class; all nodes are frozen dataclasses with structural equality."""

    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Adj(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class Implies(Formula):
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = And(())
FALSE = Or(())


# ---- structure queries --------------------------------------------------------

def free_variables(formula: Formula) -> frozenset[str]:
    if isinstance(formula, (Eq, Adj)):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Not):
        return free_variables(formula.body)
    if isinstance(formula, (And, Or)):
        out: frozenset[str] = frozenset()
        for p in formula.parts:
            out |= free_variables(p)
        return out
    if isinstance(formula, Implies):
        return free_variables(formula.premise) | free_variables(formula.conclusion)
    if isinstance(formula, (Exists, Forall)):
        return free_variables(formula.body) - {formula.var}
    raise DomainError(f"unknown node {formula!r}")


def quantifier_depth(formula: Formula) -> int:
    """Maximum nesting of quantifiers."""
    if isinstance(formula, (Eq, Adj)):
        return 0
    if isinstance(formula, Not):
        return quantifier_depth(formula.body)
    if isinstance(formula, (And, Or)):
        return max((quantifier_depth(p) for p in formula.parts), default=0)
    if isinstance(formula, Implies):
        return max(quantifier_depth(formula.premise),
                   quantifier_depth(formula.conclusion))
    if isinstance(formula, (Exists, Forall)):
        return 1 + quantifier_depth(formula.body)
    raise DomainError(f"unknown node {formula!r}")


def is_sentence(formula: Formula) -> bool:
    return not free_variables(formula)


def require_sentence(formula: Formula) -> Formula:
    free = free_variables(formula)
    if free:
        raise UnboundVariableError(
            f"sentence required; free variables: {', '.join(sorted(free))}")
    return formula


# ---- concrete syntax ------------------------------------------------------------

_TOKEN_CHARS = set("()")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _TOKEN_CHARS:
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in _TOKEN_CHARS:
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse the S-expression syntax; raises FormulaParseError with the
    character position of the offending token.  Free variables are allowed
    (use require_sentence where a closed formula is needed)."""
    tokens = _tokenize(text)
    pos = 0

    def fail(message: str, at: int | None = None) -> FormulaParseError:
        where = at if at is not None else (
            tokens[pos][1] if pos < len(tokens) else len(text))
        return FormulaParseError(message, where)

    def expect(symbol: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] != symbol:
            raise fail(f"expected {symbol!r}")
        pos += 1

    def next_atom(what: str) -> str:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] in _TOKEN_CHARS:
            raise fail(f"expected {what}")
        atom = tokens[pos][0]
        pos += 1
        return atom

    def parse_node() -> Formula:
        nonlocal pos
        expect("(")
        head = next_atom("operator")
        if head in ("=", "adj"):
            left = next_atom("variable")
            right = next_atom("variable")
            expect(")")
            return Eq(left, right) if head == "=" else Adj(left, right)
        if head == "not":
            body = parse_node()
            expect(")")
            return Not(body)
        if head in ("and", "or"):
            parts: list[Formula] = []
            while pos < len(tokens) and tokens[pos][0] == "(":
                parts.append(parse_node())
            expect(")")
            return And(tuple(parts)) if head == "and" else Or(tuple(parts))
        if head == "implies":
            premise = parse_node()
            conclusion = parse_node()
            expect(")")
            return Implies(premise, conclusion)
        if head in ("exists", "forall"):
            var = next_atom("variable")
            body = parse_node()
            expect(")")
            return Exists(var, body) if head == "exists" else Forall(var, body)
        raise fail(f"unknown operator {head!r}",
                   tokens[pos - 1][1] if pos >= 1 else 0)

    node = parse_node()
    if pos != len(tokens):
        raise fail("trailing input after formula")
    return node


def format_formula(formula: Formula) -> str:
    """Canonical single-space rendering; parse_formula round-trips it."""
    if isinstance(formula, Eq):
        return f"(= {formula.left} {formula.right})"
    if isinstance(formula, Adj):
        return f"(adj {formula.left} {formula.right})"
    if isinstance(formula, Not):
        return f"(not {format_formula(formula.body)})"
    if isinstance(formula, (And, Or)):
        head = "and" if isinstance(formula, And) else "or"
        if not formula.parts:
            return f"({head})"
        inner = " ".join(format_formula(p) for p in formula.parts)
        return f"({head} {inner})"
    if isinstance(formula, Implies):
        return (f"(implies {format_formula(formula.premise)} "
                f"{format_formula(formula.conclusion)})")
    if isinstance(formula, (Exists, Forall)):
        head = "exists" if isinstance(formula, Exists) else "forall"
        return f"({head} {formula.var} {format_formula(formula.body)})"
    raise DomainError(f"unknown node {formula!r}")


# ---- evaluation -----------------------------------------------------------------

class _Budget:
    __slots__ = ("left",)

    def __init__(self, budget: int):
        self.left = budget

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError("evaluation budget exceeded")


def evaluate(formula: Formula, graph: Graph,
             assignment: Mapping[str, int] | None = None,
             budget: int = 10 ** 8) -> bool:
    """Standard Tarskian truth under the assignment.

    The assignment must cover all free variables.  Quantifier nodes are
    memoized on the restriction of the environment to their free variables
    (the only place recomputation is exponential; keying cheaper nodes costs
    more than it saves); memo tables live only for the duration of the
    call.  The interpreter is exponential in quantifier depth by design;
    `budget` caps total node visits.
    """
    env: dict[str, int] = dict(assignment or {})
    missing = free_variables(formula) - env.keys()
    if missing:
        raise UnboundVariableError(
            f"assignment missing variables: {', '.join(sorted(missing))}")
    for var, vertex in env.items():
        if not 0 <= vertex < graph.vertex_count:
            raise DomainError(f"assignment maps {var} to invalid vertex {vertex}")

    counter = _Budget(budget)
    free_cache: dict[int, frozenset[str]] = {}
    memo: dict[tuple[int, tuple[tuple[str, int], ...]], bool] = {}

    def free_of(node: Formula) -> frozenset[str]:
        key = id(node)
        if key not in free_cache:
            free_cache[key] = free_variables(node)
        return free_cache[key]

    def run(node: Formula, env: dict[str, int]) -> bool:
        counter.spend()
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, Adj):
            return graph.has_edge(env[node.left], env[node.right])
        if isinstance(node, Not):
            return not run(node.body, env)
        if isinstance(node, And):
            return all(run(p, env) for p in node.parts)
        if isinstance(node, Or):
            return any(run(p, env) for p in node.parts)
        if isinstance(node, Implies):
            return (not run(node.premise, env)) or run(node.conclusion, env)
        if isinstance(node, (Exists, Forall)):
            key = (id(node), tuple(sorted((v, env[v]) for v in free_of(node))))
            if key in memo:
                return memo[key]
            shadowed = env.get(node.var)
            value = not isinstance(node, Exists)
            for vertex in range(graph.vertex_count):
                env[node.var] = vertex
                result = run(node.body, env)
                if result == isinstance(node, Exists):
                    value = result
                    break
            if shadowed is None:
                env.pop(node.var, None)
            else:
                env[node.var] = shadowed
            memo[key] = value
            return value
        raise DomainError(f"unknown node {node!r}")

    return run(formula, env)


# ---- formula builders -------------------------------------------------------------

def distinct_all(names: Sequence[str]) -> Formula:
    """NI(u_1, ..., u_h): all names pairwise distinct (true for h <= 1)."""
    return And(tuple(Not(Eq(a, b)) for a, b in combinations(names, 2)))


def clique_on(names: Sequence[str]) -> Formula:
    """K(x_1..x_m): the names are pairwise distinct and pairwise adjacent."""
    if len(names) < 2:
        raise DomainError("clique formula needs at least 2 variables")
    return And((distinct_all(names),)
               + tuple(Adj(a, b) for a, b in combinations(names, 2)))


def build_ni(h: int) -> Formula:
    """NI over canonical variables u1..uh."""
    if h < 0:
        raise DomainError("need h >= 0")
    return distinct_all([f"u{i}" for i in range(1, h + 1)])


def build_k(m: int) -> Formula:
    """K over canonical variables x1..xm."""
    return clique_on([f"x{i}" for i in range(1, m + 1)])


def _fresh_names(prefix: str, count: int, counter: list[int]) -> list[str]:
    names = []
    for _ in range(count):
        counter[0] += 1
        names.append(f"{prefix}{counter[0]}")
    return names


def _max_clique_formula(names: Sequence[str], counter: list[int]) -> Formula:
    """MK(x_1..x_m): the names form an m-clique and every m-clique of the
    graph either coincides with it or shares at most one vertex.

    The permutation disjunction over the symmetric group is built literally;
    it has m! disjuncts and is capped at m = 4 (property A at desk scale
    needs m <= 3).
    """
    m = len(names)
    if m > _MK_PERMUTATION_CAP:
        raise ResourceLimitError(
            f"MK permutation block capped at m = {_MK_PERMUTATION_CAP}")
    others = _fresh_names("y", m, counter)
    same_set = Or(tuple(
        And(tuple(Eq(names[i], others[sigma[i]]) for i in range(m)))
        for sigma in permutations(range(m))))
    overlap_le_one = Or(tuple(
        And(tuple(Not(Eq(names[i_hat], others[j]))
                  for i_hat in range(m) if i_hat != i
                  for j in range(m)))
        for i in range(m)))
    condition = Implies(clique_on(others), Or((same_set, overlap_le_one)))
    quantified: Formula = condition
    for var in reversed(others):
        quantified = Forall(var, quantified)
    return And((clique_on(names), quantified))


def build_mk(m: int) -> Formula:
    """MK over canonical variables x1..xm (quantifier depth m)."""
    if m < 2:
        raise DomainError("need m >= 2")
    return _max_clique_formula([f"x{i}" for i in range(1, m + 1)], [0])


def _chain_formula(m: int, length: int, left: str, right: str,
                   avoid: Sequence[str], counter: list[int]) -> Formula:
    """D_l(left, right, avoid...): the halving recursion.

    Recursive calls thread the accumulated avoid list plus the far
    endpoint: nodal vertices must stay off the avoided set, so each half
    additionally avoids the opposite endpoint of the full span.
    """
    if length == 1:
        inner = _fresh_names("z", m - 2, counter)
        names = [left, right] + inner
        body = And((_max_clique_formula(names, counter),
                    distinct_all(list(names) + list(avoid))))
        formula: Formula = body
        for var in reversed(inner):
            formula = Exists(var, formula)
        return formula
    mid = _fresh_names("w", 1, counter)[0]
    first = _chain_formula(m, length // 2, left, mid,
                           list(avoid) + [right], counter)
    second = _chain_formula(m, (length + 1) // 2, mid, right,
                            list(avoid) + [left], counter)
    guard = distinct_all([left, right, mid] + list(avoid))
    return Exists(mid, And((first, second, guard)))


def build_d(m: int, length: int, h: int) -> Formula:
    """D_l over endpoints x1, x2 and avoided variables u1..uh.

    Quantifier depth is ceil(log2 l) + 2m - 2 exactly.
    """
    if m < 2:
        raise DomainError("need m >= 2")
    if length < 1:
        raise DomainError("need l >= 1")
    if h < 0:
        raise DomainError("need h >= 0")
    avoid = [f"u{i}" for i in range(1, h + 1)]
    return _chain_formula(m, length, "x1", "x2", avoid, [0])


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def property_a_chain_length(m: int, k: int) -> int:
    """l = 2^(k1 - 1) - 2 with k1 = k - 10m + 8 (requires k >= 10m - 5)."""
    if m < 2:
        raise DomainError("need m >= 2")
    k1 = k - 10 * m + 8
    if k1 < 3:
        raise DomainError(f"need k >= 10m - 5 = {10 * m - 5}, got k={k}")
    return 2 ** (k1 - 1) - 2


def build_property_a(m: int, k: int) -> Formula:
    """The depth-k refutation sentence: a center clique at x, two cliques at
    each of y and y', and four chains of length l = 2^(k1-1)-2 joining them,
    which together pin a figure-eight of two length-2^k1 clique cycles.

    The recursion prices a chain limb at ceil(log2 l) + 2m - 2 quantifiers;
    when l lands exactly on a power of two (k1 = 3) that is one short of the
    advertised depth budget k, so each chain limb is padded with a vacuous
    existential to restore quantifier_depth(A) = k without changing meaning.
    """
    length = property_a_chain_length(m, k)
    k1 = k - 10 * m + 8
    counter = [0]

    x, y, yp = "x", "y", "yp"
    v_groups = [[f"v{i}_{j}" for j in range(1, m)] for i in range(1, 5)]
    u_groups = [[f"u{i}_{j}" for j in range(1, m)] for i in range(1, 5)]
    all_vars = ([x, y, yp]
                + [v for grp in v_groups for v in grp]
                + [u for grp in u_groups for u in grp])

    parts: list[Formula] = [distinct_all(all_vars)]
    for i in range(2):
        parts.append(_max_clique_formula([y] + u_groups[i], counter))
        parts.append(_max_clique_formula([yp] + u_groups[i + 2], counter))

    pad = (k1 - 1) - _ceil_log2(length)
    for i in range(4):
        parts.append(_max_clique_formula([x] + v_groups[i], counter))
        avoid = [x, y, yp]
        for i_hat in range(4):
            keep = m - 1 if i_hat != i else m - 2
            avoid.extend(v_groups[i_hat][:keep])
            avoid.extend(u_groups[i_hat][:keep])
        limb = _chain_formula(m, length, v_groups[i][m - 2], u_groups[i][m - 2],
                              avoid, counter)
        for _ in range(pad):
            slack = _fresh_names("p", 1, counter)[0]
            limb = Exists(slack, And((Eq(slack, slack), limb)))
        parts.append(limb)

    formula: Formula = And(tuple(parts))
    for var in reversed(all_vars):
        formula = Exists(var, formula)
    return formula


# ---- combinatorial chain checker ---------------------------------------------------

def _iter_cliques(g: Graph, m: int) -> Iterator[tuple[int, ...]]:
    """All m-cliques, each once, as sorted vertex tuples."""
    masks = g.adjacency_masks

    def grow(clique: list[int], candidates: int) -> Iterator[tuple[int, ...]]:
        if len(clique) == m:
            yield tuple(clique)
            return
        c = candidates
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            clique.append(v)
            yield from grow(clique, candidates & masks[v] & ~((1 << (v + 1)) - 1))
            clique.pop()

    yield from grow([], (1 << g.vertex_count) - 1)


def check_m_chain_exists(g: Graph, m: int, length: int,
                         ends: tuple[int, int], avoid: Iterable[int] = (),
                         max_vertices: int = 40) -> bool:
    """True iff the graph contains an m-chain of length at most `length`
    joining the two ends and touching no avoided vertex.

    Direct search over clique sequences: consecutive cliques share exactly
    the nodal walk vertex and all cliques pairwise share at most one vertex.
    The "at most" length reading is what the chain formula D_l actually
    guarantees: a clique walk of length l certified by D_l can fold back on
    itself, but splicing out revisited cliques always leaves an honest chain
    of no greater length, so soundness of D_l against this checker is exact.
    """
    if g.vertex_count > max_vertices:
        raise ResourceLimitError(f"chain search capped at {max_vertices} vertices")
    if m < 2 or length < 1:
        raise DomainError("need m >= 2 and length >= 1")
    u, v = ends
    if u == v:
        raise DomainError("chain ends must be distinct")
    blocked = set(avoid)
    if u in blocked or v in blocked:
        return False
    cliques = [c for c in _iter_cliques(g, m) if not blocked & set(c)]
    by_vertex: dict[int, list[int]] = {}
    for idx, c in enumerate(cliques):
        for w in c:
            by_vertex.setdefault(w, []).append(idx)

    def compatible(idx: int, used: list[int]) -> bool:
        cset = set(cliques[idx])
        return all(len(cset & set(cliques[j])) <= 1 for j in used)

    def walk(current: int, used: list[int]) -> bool:
        if used and current == v:
            return True
        if len(used) == length:
            return False
        for idx in by_vertex.get(current, ()):
            if idx in used or not compatible(idx, used):
                continue
            for nxt in cliques[idx]:
                if nxt == current:
                    continue
                used.append(idx)
                if walk(nxt, used):
                    return True
                used.pop()
        return False

    return walk(u, [])
