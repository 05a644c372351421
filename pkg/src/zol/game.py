"""Exact solver for the k-round Ehrenfeucht game EHR(G, H, k).

Play rules, implemented verbatim: each round Spoiler picks a vertex in
either graph and Duplicator answers in the other.  If Spoiler re-picks a
vertex already chosen in some earlier round, Duplicator's answer is forced
to that round's partner; if Spoiler picks a fresh vertex, Duplicator must
answer with a fresh vertex and loses immediately when none is left.
Duplicator wins iff the final round-aligned choices form a partial
isomorphism.  Draws are impossible; the game value is boolean.

States are the set of chosen (left, right) vertex pairs plus the rounds
remaining; the pair set always stays a partial matching, so repeats collapse
for free.  Memoization keys canonicalize the pair set under the joint action
of Aut(G) x Aut(H) when the group product is small, falling back to the raw
sorted pair tuple otherwise; the fallback never changes verdicts, only
table size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .analysis import automorphisms
from .errors import DomainError, IllegalMoveError, ResourceLimitError
from .graphs import Graph

SPOILER = "spoiler"
DUPLICATOR = "duplicator"

LEFT = "left"
RIGHT = "right"

Move = tuple[str, int]  # (side, vertex)
Pairs = tuple[tuple[int, int], ...]

_AUT_GROUP_CAP = 200        # per-graph cutoff while enumerating
_AUT_PRODUCT_CAP = 2_000    # |Aut(G)| * |Aut(H)| ceiling for canonical keys
_DEFAULT_SIZE_CAP = 16
_UNCAPPED_ROUNDS = 4


def partial_iso_check(left: Graph, right: Graph,
                      pairs: Sequence[tuple[int, int]]) -> bool:
    """True iff the deduplicated pairs form a well-defined partial bijection
    preserving equality and adjacency in both directions."""
    seen: dict[int, int] = {}
    back: dict[int, int] = {}
    for g, h in pairs:
        if not (0 <= g < left.vertex_count and 0 <= h < right.vertex_count):
            return False
        if seen.get(g, h) != h or back.get(h, g) != g:
            return False
        seen[g] = h
        back[h] = g
    items = list(seen.items())
    for i in range(len(items)):
        g1, h1 = items[i]
        for j in range(i + 1, len(items)):
            g2, h2 = items[j]
            if left.has_edge(g1, g2) != right.has_edge(h1, h2):
                return False
    return True


@dataclass
class _Arena:
    left: Graph
    right: Graph
    canonicalize: bool
    left_auts: tuple[tuple[int, ...], ...] = ()
    right_auts: tuple[tuple[int, ...], ...] = ()
    memo: dict[tuple[Pairs, int], bool] = field(default_factory=dict)

    def canon(self, pairs: Pairs) -> Pairs:
        if not self.canonicalize:
            return pairs
        best = None
        for phi in self.left_auts:
            for psi in self.right_auts:
                cand = tuple(sorted((phi[g], psi[h]) for g, h in pairs))
                if best is None or cand < best:
                    best = cand
        return best if best is not None else pairs


def _legal_spoiler_moves(arena: _Arena) -> Iterator[Move]:
    for v in range(arena.left.vertex_count):
        yield (LEFT, v)
    for v in range(arena.right.vertex_count):
        yield (RIGHT, v)


def _duplicator_replies(arena: _Arena, pairs: Pairs, move: Move
                        ) -> tuple[list[Move], bool]:
    """Legal Duplicator answers to a Spoiler move.

    Returns (replies, forced).  An empty reply list means Duplicator is
    stuck (no fresh vertex on the other side) and loses outright.
    """
    side, v = move
    if side == LEFT:
        partner = {g: h for g, h in pairs}.get(v)
        if partner is not None:
            return [(RIGHT, partner)], True
        used = {h for _, h in pairs}
        return [(RIGHT, h) for h in range(arena.right.vertex_count)
                if h not in used], False
    partner = {h: g for g, h in pairs}.get(v)
    if partner is not None:
        return [(LEFT, partner)], True
    used = {g for g, _ in pairs}
    return [(LEFT, g) for g in range(arena.left.vertex_count)
            if g not in used], False


def _after(pairs: Pairs, move: Move, reply: Move) -> Pairs:
    if move[0] == LEFT:
        pair = (move[1], reply[1])
    else:
        pair = (reply[1], move[1])
    if pair in pairs:
        return pairs
    return tuple(sorted(pairs + (pair,)))


def _duplicator_wins(arena: _Arena, pairs: Pairs, rounds: int) -> bool:
    if rounds == 0:
        return partial_iso_check(arena.left, arena.right, pairs)
    key = (arena.canon(pairs), rounds)
    if key in arena.memo:
        return arena.memo[key]
    value = True
    moved = False
    for move in _legal_spoiler_moves(arena):
        moved = True
        replies, _ = _duplicator_replies(arena, pairs, move)
        if not any(_duplicator_wins(arena, _after(pairs, move, reply), rounds - 1)
                   for reply in replies):
            value = False
            break
    if not moved:
        # both graphs empty: no round can be played, the empty map stands
        value = partial_iso_check(arena.left, arena.right, pairs)
    arena.memo[key] = value
    return value


@dataclass(frozen=True)
class GameResult:
    winner: str
    rounds: int
    strategy: dict | None = None

    def to_json(self) -> str:
        return json.dumps({"winner": self.winner, "rounds": self.rounds,
                           "strategy": self.strategy}, indent=2)


def _bounded_aut_list(g: Graph) -> tuple[tuple[int, ...], ...] | None:
    """The full automorphism group, or None when it exceeds the cutoff."""
    found = []
    try:
        for phi in automorphisms(g):
            found.append(phi)
            if len(found) > _AUT_GROUP_CAP:
                return None
    except ResourceLimitError:
        return None
    return tuple(found)


def _make_arena(left: Graph, right: Graph, memo: str) -> _Arena:
    if memo not in ("auto", "canonical", "raw", "off"):
        raise DomainError(f"unknown memo mode {memo!r}")
    canonicalize = False
    left_auts = None
    right_auts = None
    if memo in ("auto", "canonical"):
        left_auts = _bounded_aut_list(left)
        right_auts = _bounded_aut_list(right)
        canonicalize = (left_auts is not None and right_auts is not None
                        and len(left_auts) * len(right_auts) <= _AUT_PRODUCT_CAP)
        if memo == "canonical" and not canonicalize:
            raise ResourceLimitError("automorphism groups too large to canonicalize")
    arena = _Arena(left, right, canonicalize,
                   left_auts if canonicalize else (),
                   right_auts if canonicalize else ())
    assert not canonicalize or (arena.left_auts and arena.right_auts)
    if memo == "off":
        class _NoMemo(dict):
            def __setitem__(self, key, value):  # discard
                pass
        arena.memo = _NoMemo()
    return arena


def solve_ehr(left: Graph, right: Graph, rounds: int, *,
              extract_strategy: bool = True, memo: str = "auto",
              size_cap: int = _DEFAULT_SIZE_CAP) -> GameResult:
    """Winner of EHR(left, right, rounds) under optimal play, plus a
    replayable strategy tree for the winner.

    memo: "auto" canonicalizes states under automorphism pairs when the
    groups are small, "raw" memoizes raw states, "off" disables memoization
    (oracle mode for equivalence tests), "canonical" forces canonicalization.
    """
    if rounds < 0:
        raise DomainError("need rounds >= 0")
    if left.vertex_count + right.vertex_count > size_cap and rounds > _UNCAPPED_ROUNDS:
        raise ResourceLimitError(
            f"combined size {left.vertex_count + right.vertex_count} over cap "
            f"{size_cap} needs rounds <= {_UNCAPPED_ROUNDS}")
    arena = _make_arena(left, right, memo)
    duplicator_wins = _duplicator_wins(arena, (), rounds)
    winner = DUPLICATOR if duplicator_wins else SPOILER
    strategy = None
    if extract_strategy:
        strategy = _extract_strategy(arena, (), rounds, winner)
    return GameResult(winner, rounds, strategy)


def _move_key(move: Move) -> str:
    return f"{move[0]}:{move[1]}"


def parse_move(text: str) -> Move:
    side, _, vertex = text.partition(":")
    if side not in (LEFT, RIGHT):
        raise DomainError(f"move side must be left/right, got {side!r}")
    return (side, int(vertex))


def _extract_strategy(arena: _Arena, pairs: Pairs, rounds: int,
                      winner: str) -> dict:
    """Decision tree for the winner; ties broken by the lexicographically
    smallest winning move (left before right, then vertex order)."""
    if rounds == 0:
        return {"outcome": "final_check",
                "check": partial_iso_check(arena.left, arena.right, pairs)}
    if winner == DUPLICATOR:
        responses = {}
        for move in _legal_spoiler_moves(arena):
            replies, _ = _duplicator_replies(arena, pairs, move)
            best = None
            for reply in sorted(replies):
                nxt = _after(pairs, move, reply)
                if _duplicator_wins(arena, nxt, rounds - 1):
                    best = (reply, nxt)
                    break
            assert best is not None, "duplicator-winning state lost a reply"
            reply, nxt = best
            responses[_move_key(move)] = {
                "reply": _move_key(reply),
                "next": _extract_strategy(arena, nxt, rounds - 1, winner)}
        if not responses:
            return {"outcome": "final_check",
                    "check": partial_iso_check(arena.left, arena.right, pairs)}
        return {"to_move": SPOILER, "responses": responses}
    # spoiler strategy: pick the smallest winning move
    for move in sorted(_legal_spoiler_moves(arena)):
        replies, _ = _duplicator_replies(arena, pairs, move)
        if not replies:
            return {"to_move": SPOILER, "move": _move_key(move),
                    "children": {}, "outcome": "duplicator_stuck"}
        if all(not _duplicator_wins(arena, _after(pairs, move, reply), rounds - 1)
               for reply in replies):
            children = {}
            for reply in replies:
                nxt = _after(pairs, move, reply)
                children[_move_key(reply)] = _extract_strategy(
                    arena, nxt, rounds - 1, winner)
            return {"to_move": SPOILER, "move": _move_key(move),
                    "children": children}
    raise AssertionError("spoiler-winning state lost its winning move")


@dataclass(frozen=True)
class Transcript:
    rounds: tuple[tuple[Move, Move], ...]
    pairs: Pairs
    final_check: bool
    winner: str

    def to_json(self) -> str:
        return json.dumps({
            "rounds": [{"spoiler": _move_key(s), "duplicator": _move_key(d)}
                       for s, d in self.rounds],
            "pairs": [list(p) for p in self.pairs],
            "final_check": self.final_check,
            "winner": self.winner}, indent=2)


def replay_strategy(left: Graph, right: Graph, result: GameResult,
                    adversary_moves: Sequence[Move | str]) -> Transcript:
    """Replay the stored strategy against a fixed adversary move list.

    For a Duplicator strategy the adversary plays Spoiler (one move per
    round); for a Spoiler strategy the adversary plays Duplicator (one reply
    per round).  Illegal moves raise IllegalMoveError naming the violated
    rule; the transcript reports the final partial-isomorphism verdict.
    """
    if result.strategy is None:
        raise DomainError("result carries no strategy (extract_strategy=False)")
    moves: list[Move] = [parse_move(m) if isinstance(m, str) else m
                         for m in adversary_moves]
    if len(moves) != result.rounds:
        raise DomainError(f"need exactly {result.rounds} adversary moves")
    node = result.strategy
    pairs: Pairs = ()
    rounds: list[tuple[Move, Move]] = []
    arena = _Arena(left, right, canonicalize=False)

    def check_in_range(move: Move) -> None:
        side, v = move
        bound = left.vertex_count if side == LEFT else right.vertex_count
        if not 0 <= v < bound:
            raise IllegalMoveError(
                f"vertex {v} out of range on the {side} graph")

    for move in moves:
        check_in_range(move)
        if result.winner == DUPLICATOR:
            # adversary is Spoiler: any in-range move is legal
            entry = node["responses"][_move_key(move)]
            reply = parse_move(entry["reply"])
            rounds.append((move, reply))
            pairs = _after(pairs, move, reply)
            node = entry["next"]
        else:
            # adversary is Duplicator answering the stored Spoiler move
            spoiler_move = parse_move(node["move"])
            replies, forced = _duplicator_replies(arena, pairs, spoiler_move)
            if move[0] == spoiler_move[0]:
                raise IllegalMoveError(
                    "duplicator must answer in the other graph")
            if not replies:
                raise IllegalMoveError(
                    "duplicator has no legal reply (no fresh vertex left)")
            if move not in replies:
                if forced:
                    raise IllegalMoveError(
                        "repeat-pick rule: duplicator must repeat the matched "
                        f"vertex {_move_key(replies[0])}")
                raise IllegalMoveError(
                    "duplicator must pick a previously unused vertex")
            rounds.append((spoiler_move, move))
            pairs = _after(pairs, spoiler_move, move)
            node = node["children"].get(_move_key(move))
            if node is None:
                raise AssertionError("strategy tree missing a legal reply branch")
    check = partial_iso_check(left, right, pairs)
    return Transcript(tuple(rounds), pairs, check,
                      DUPLICATOR if check else SPOILER)
