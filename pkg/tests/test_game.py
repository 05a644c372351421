"""Ehrenfeucht game solver: examples, invariants, strategy replay."""

from __future__ import annotations

import itertools
import json
import random

import pytest

from conftest import graphs_up_to_iso, random_graph
from zol.errors import DomainError, IllegalMoveError, ResourceLimitError
from zol.game import (DUPLICATOR, LEFT, RIGHT, SPOILER, parse_move,
                      partial_iso_check, replay_strategy, solve_ehr)
from zol.graphs import Graph, complete_graph, cycle_graph, empty_graph, path_graph

K3, K4 = complete_graph(3), complete_graph(4)
C5, C6 = cycle_graph(5), cycle_graph(6)


# ---- partial isomorphism ------------------------------------------------------

def test_partial_iso_triangle_onto_triangle():
    host = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    assert partial_iso_check(K3, host, [(0, 1), (1, 2), (2, 0)])


def test_partial_iso_rejects_non_function():
    assert not partial_iso_check(K3, K3, [(0, 0), (0, 1)])
    assert not partial_iso_check(K3, K3, [(0, 0), (1, 0)])
    assert partial_iso_check(K3, K3, [(0, 0), (0, 0)])  # repeat is fine


def test_partial_iso_rejects_edge_to_nonedge():
    assert not partial_iso_check(K3, path_graph(3), [(0, 0), (1, 2)])


# ---- solver examples ------------------------------------------------------------

def test_identity_game_is_duplicator_win():
    for g in (K3, C5, path_graph(4)):
        for k in range(4):
            assert solve_ehr(g, g, k, extract_strategy=False).winner == DUPLICATOR


def test_k3_vs_k4():
    assert solve_ehr(K3, K4, 3, extract_strategy=False).winner == DUPLICATOR
    assert solve_ehr(K3, K4, 4, extract_strategy=False).winner == SPOILER


def test_c5_vs_c6():
    assert solve_ehr(C5, C6, 3, extract_strategy=False).winner == SPOILER


def test_zero_rounds_vacuous():
    assert solve_ehr(K3, empty_graph(0), 0, extract_strategy=False).winner \
        == DUPLICATOR


def test_empty_vs_nonempty():
    assert solve_ehr(empty_graph(0), K3, 1, extract_strategy=False).winner \
        == SPOILER
    assert solve_ehr(empty_graph(0), empty_graph(0), 3,
                     extract_strategy=False).winner == DUPLICATOR


def test_size_cap():
    big = empty_graph(12)
    with pytest.raises(ResourceLimitError):
        solve_ehr(big, big, 5, extract_strategy=False)
    # k <= 4 is allowed over the cap
    assert solve_ehr(big, big, 2, extract_strategy=False).winner == DUPLICATOR


# ---- invariants -------------------------------------------------------------------

def _winner(g, h, k, memo="auto"):
    return solve_ehr(g, h, k, extract_strategy=False, memo=memo).winner


def test_spoiler_wins_are_monotone_in_rounds():
    rng = random.Random(1)
    for _ in range(12):
        g = random_graph(rng, rng.randint(1, 4), 0.5)
        h = random_graph(rng, rng.randint(1, 4), 0.5)
        winners = [_winner(g, h, k) for k in range(4)]
        for earlier, later in itertools.pairwise(winners):
            if earlier == SPOILER:
                assert later == SPOILER


def test_winner_symmetric_in_sides():
    rng = random.Random(2)
    for _ in range(12):
        g = random_graph(rng, rng.randint(1, 4), 0.5)
        h = random_graph(rng, rng.randint(1, 4), 0.5)
        for k in (1, 2, 3):
            assert _winner(g, h, k) == _winner(h, g, k)


def test_memo_modes_agree_sample():
    rng = random.Random(3)
    for _ in range(8):
        g = random_graph(rng, rng.randint(1, 4), 0.5)
        h = random_graph(rng, rng.randint(1, 4), 0.5)
        for k in (1, 2, 3):
            expected = _winner(g, h, k, memo="off")
            assert _winner(g, h, k, memo="raw") == expected
            assert _winner(g, h, k, memo="auto") == expected


def test_duplicator_win_iff_isomorphic_at_high_k():
    # with k >= v(G)+v(H), duplicator-win forces isomorphism on small graphs
    from zol.analysis import are_isomorphic
    graphs = graphs_up_to_iso(3)
    for g in graphs:
        for h in graphs:
            win = _winner(g, h, 6)
            assert (win == DUPLICATOR) == are_isomorphic(g, h)


def _back_and_forth(g, h, k, pairs=()):
    """Textbook k-round back-and-forth relation, as an independent oracle.

    No freshness or forced-reply rules: the responder may answer with any
    vertex, and impossible answers simply fail the final partial-map check.
    """

    def is_partial_iso(ps):
        fwd, back = {}, {}
        for a, b in ps:
            if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                return False
        items = list(fwd.items())
        return all(g.has_edge(a1, a2) == h.has_edge(b1, b2)
                   for i, (a1, b1) in enumerate(items)
                   for (a2, b2) in items[i + 1:])

    if k == 0:
        return is_partial_iso(pairs)
    forth = all(any(_back_and_forth(g, h, k - 1, pairs + ((a, b),))
                    for b in range(h.vertex_count)) if h.vertex_count else False
                for a in range(g.vertex_count))
    back = all(any(_back_and_forth(g, h, k - 1, pairs + ((a, b),))
                   for a in range(g.vertex_count)) if g.vertex_count else False
               for b in range(h.vertex_count))
    return forth and back


def test_solver_matches_textbook_back_and_forth():
    graphs = graphs_up_to_iso(3)
    for g in graphs:
        for h in graphs:
            for k in (0, 1, 2, 3):
                expected = DUPLICATOR if _back_and_forth(g, h, k) else SPOILER
                assert _winner(g, h, k) == expected, (g, h, k)


# ---- strategy replay ----------------------------------------------------------------

def test_replay_duplicator_identity():
    result = solve_ehr(K3, K3, 2)
    transcript = replay_strategy(K3, K3, result, ["left:0", "left:1"])
    assert transcript.final_check
    assert transcript.winner == DUPLICATOR
    # spoiler may switch sides freely
    transcript = replay_strategy(K3, K3, result, ["right:2", "left:2"])
    assert transcript.final_check


def test_replay_handles_repeat_picks():
    result = solve_ehr(K3, K3, 3)
    transcript = replay_strategy(K3, K3, result,
                                 ["left:0", "left:0", "right:1"])
    assert transcript.final_check
    assert len(transcript.pairs) <= 2  # repeated round collapses


def test_replay_spoiler_strategy_beats_any_duplicator():
    result = solve_ehr(K3, K4, 4)
    assert result.winner == SPOILER

    def greedy_duplicator(moves_so_far, node):
        # adversary: always the lexicographically smallest legal reply
        spoiler_move = parse_move(node["move"])
        side = LEFT if spoiler_move[0] == RIGHT else RIGHT
        for key in sorted(node["children"]):
            reply = parse_move(key)
            if reply[0] == side:
                return key
        raise AssertionError("no reply recorded")

    node = result.strategy
    moves = []
    while node.get("children"):
        key = greedy_duplicator(moves, node)
        moves.append(key)
        node = node["children"][key]
    if node.get("outcome") == "duplicator_stuck":
        # duplicator had no legal reply at all: spoiler wins outright
        return
    transcript = replay_strategy(K3, K4, result, moves)
    assert not transcript.final_check
    assert transcript.winner == SPOILER


def test_replay_rejects_wrong_side():
    result = solve_ehr(K3, K4, 4)
    first = parse_move(result.strategy["move"])
    with pytest.raises(IllegalMoveError) as err:
        replay_strategy(K3, K4, result, [(first[0], 0), (LEFT, 0),
                                         (LEFT, 0), (LEFT, 0)])
    assert "other graph" in str(err.value)


def test_replay_rejects_stale_vertex():
    # duplicator must answer a fresh spoiler pick with a fresh vertex
    result = solve_ehr(path_graph(3), path_graph(3), 2)
    assert result.winner == DUPLICATOR
    spoiler_result = solve_ehr(path_graph(3), cycle_graph(4), 4)
    assert spoiler_result.winner == SPOILER
    node = spoiler_result.strategy
    first = parse_move(node["move"])
    other = RIGHT if first[0] == LEFT else LEFT
    reply1 = (other, 0)
    key1 = f"{reply1[0]}:{reply1[1]}"
    assert key1 in node["children"]
    with pytest.raises(IllegalMoveError) as err:
        replay_strategy(path_graph(3), cycle_graph(4), spoiler_result,
                        [reply1, reply1, reply1, reply1])
    assert "unused" in str(err.value) or "repeat" in str(err.value)


def test_replay_rejects_out_of_range():
    result = solve_ehr(K3, K3, 1)
    with pytest.raises(IllegalMoveError) as err:
        replay_strategy(K3, K3, result, ["left:9"])
    assert "out of range" in str(err.value)


def test_replay_move_count_checked():
    result = solve_ehr(K3, K3, 2)
    with pytest.raises(DomainError):
        replay_strategy(K3, K3, result, ["left:0"])


def test_result_json_serializable():
    result = solve_ehr(K3, K4, 2)
    doc = json.loads(result.to_json())
    assert doc["winner"] == DUPLICATOR
    assert doc["strategy"]["to_move"] == SPOILER
