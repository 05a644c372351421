"""Clique-chain generators and the strictly balanced search."""

from __future__ import annotations

from fractions import Fraction

import pytest

from zol.analysis import density, is_strictly_balanced
from zol.constructions import (figure_eight_density,
                               find_strictly_balanced_with_density,
                               make_figure_eight, make_m_chain, make_m_cycle)
from zol.errors import DomainError
from zol.graphs import complete_graph, cycle_graph
from zol.logic import check_m_chain_exists
from zol.thresholds import refutation_alpha, refutation_k1


def test_m_cycle_degenerates_to_cycle():
    assert make_m_cycle(2, 5).edges == cycle_graph(5).edges


def test_m_cycle_example():
    g = make_m_cycle(3, 4)
    assert (g.vertex_count, g.edge_count) == (8, 12)
    assert density(g) == Fraction(3, 2)


def test_m_cycle_grid():
    for m in range(2, 6):
        for d in range(3, 9):
            g = make_m_cycle(m, d)
            assert g.vertex_count == d * (m - 1)
            assert g.edge_count == d * m * (m - 1) // 2
            assert density(g) == Fraction(m, 2)


def test_m_chain_path_case():
    chain = make_m_chain(2, 3)
    assert chain.graph.edge_count == 3
    assert chain.ends == (0, 3)
    assert chain.graph.edges == frozenset({(0, 1), (1, 2), (2, 3)})


def test_m_chain_two_triangles():
    chain = make_m_chain(3, 2)
    assert (chain.graph.vertex_count, chain.graph.edge_count) == (5, 6)
    assert chain.ends == (0, 4)
    # two triangles sharing exactly the middle nodal vertex
    assert chain.graph.degree(2) == 4


def test_m_chain_round_trip_with_checker():
    for m in range(2, 5):
        for d in range(1, 7):
            chain = make_m_chain(m, d)
            assert check_m_chain_exists(chain.graph, m, d, chain.ends)


def test_figure_eight_golden_instance():
    g = make_figure_eight(2, 8, 8)
    assert (g.vertex_count, g.edge_count) == (15, 16)
    assert density(g) == Fraction(16, 15)


def test_figure_eight_m3():
    g = make_figure_eight(3, 4, 4)
    assert (g.vertex_count, g.edge_count) == (15, 24)


def test_figure_eight_density_formula_grid():
    for m in (2, 3):
        for l1 in range(4, 9):
            for l2 in range(4, 9):
                g = make_figure_eight(m, l1, l2)
                total = l1 + l2
                assert g.vertex_count == total * (m - 1) - 1
                assert g.edge_count == total * m * (m - 1) // 2
                display = 1 / (Fraction(2, m) - Fraction(2, total * m * (m - 1)))
                assert density(g) == display
                assert figure_eight_density(m, l1, l2) == display


def test_figure_eight_strictly_balanced_grid_m2():
    for l1 in range(4, 9):
        for l2 in range(4, 9):
            assert is_strictly_balanced(make_figure_eight(2, l1, l2))


def test_figure_eight_density_vs_refutation_alpha():
    for m, k in ((2, 15), (3, 25)):
        k1 = refutation_k1(m, k)
        g = make_figure_eight(m, 2 ** k1, 2 ** k1)
        assert density(g) == 1 / refutation_alpha(m, k)


def test_equality_only_at_power_of_two():
    # density >= 1/alpha on the grid, equality only at l1 = l2 = 2^k1
    alpha = refutation_alpha(2, 15)
    k1 = refutation_k1(2, 15)
    for l1 in range(4, 9):
        for l2 in range(4, 9):
            rho = figure_eight_density(2, l1, l2)
            assert rho >= 1 / alpha
            if (l1, l2) == (2 ** k1, 2 ** k1):
                assert rho == 1 / alpha
            else:
                assert rho > 1 / alpha


def test_parameter_validation():
    with pytest.raises(DomainError):
        make_m_cycle(1, 5)
    with pytest.raises(DomainError):
        make_m_cycle(3, 2)
    with pytest.raises(DomainError):
        make_m_chain(2, 0)
    with pytest.raises(DomainError):
        make_figure_eight(2, 2, 4)


def test_balanced_search_examples():
    assert find_strictly_balanced_with_density(Fraction(1), 6).edges == \
        complete_graph(3).edges
    assert find_strictly_balanced_with_density(Fraction(3, 2), 6).edges == \
        complete_graph(4).edges
    near_k4 = find_strictly_balanced_with_density(Fraction(5, 4), 6)
    assert (near_k4.vertex_count, near_k4.edge_count) == (4, 5)
    assert is_strictly_balanced(near_k4)


def test_balanced_search_verifies_contract():
    for target in (Fraction(1), Fraction(3, 2), Fraction(5, 4), Fraction(7, 5)):
        g = find_strictly_balanced_with_density(target, 8)
        assert g is not None
        assert density(g) == target
        assert is_strictly_balanced(g)


def test_balanced_search_none():
    assert find_strictly_balanced_with_density(Fraction(3, 5), 12) is None


def test_balanced_search_preconditions():
    with pytest.raises(DomainError):
        find_strictly_balanced_with_density(Fraction(1, 2), 6)
    with pytest.raises(DomainError):
        find_strictly_balanced_with_density(Fraction(1), 13)
