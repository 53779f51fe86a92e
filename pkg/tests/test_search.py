from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_

from stvis.graph_core import Graph, all_pairs_distances, complete_graph, cycle_graph, path_graph
from stvis.search import (
    NODE_BUDGET_ENV,
    BudgetExceeded,
    EnumerationCapExceeded,
    GraphTooLarge,
    branch_and_bound_max,
    branch_order,
    enumerate_optima,
    exhaustive_max,
    greedy_lower_bound,
    solve_triangle,
)
from stvis.visibility import Variant, is_valid

from conftest import brute_valid, to_nx

ALL = list(Variant)


def brute_optima(g, variant):
    h = to_nx(g)
    for size in range(g.vertex_count, -1, -1):
        found = [c for c in itertools.combinations(range(g.vertex_count), size)
                 if brute_valid(h, c, variant)]
        if found:
            return size, found


@pytest.mark.parametrize("variant", ALL)
def test_exhaustive_st1_matches_oracle(st1, variant):
    size, optima = brute_optima(st1.graph, variant)
    res = exhaustive_max(st1.graph, variant, count_optima=True)
    assert res.optimum == size and res.exact
    assert res.all_optima == optima
    assert res.witness == optima[0]


@pytest.mark.parametrize("variant", ALL)
def test_bnb_matches_exhaustive_st2(st2, variant):
    ex = exhaustive_max(st2.graph, variant, dist=st2.dist)
    bb = branch_and_bound_max(st2.graph, variant, dist=st2.dist)
    assert bb.optimum == ex.optimum and bb.exact
    assert is_valid(st2.graph, st2.dist, bb.witness, variant)


def test_small_graph_values():
    # every pair of K_n is adjacent; a path admits only its two ends
    for variant in ALL:
        assert exhaustive_max(complete_graph(4), variant).optimum == 4
    assert exhaustive_max(path_graph(5), Variant.MUTUAL).optimum == 2
    assert exhaustive_max(path_graph(5), Variant.GENERAL_POSITION).optimum == 2
    assert exhaustive_max(cycle_graph(6), Variant.MUTUAL).optimum == 3


@st_.composite
def small_graphs(draw):
    n = draw(st_.integers(2, 8))
    edges = [(draw(st_.integers(0, i - 1)), i) for i in range(1, n)]
    extra = draw(st_.lists(st_.tuples(st_.integers(0, n - 1), st_.integers(0, n - 1)), max_size=10))
    edges += [(a, b) for a, b in extra if a != b]
    return Graph.from_edges(n, edges)


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st_.sampled_from(ALL))
def test_methods_agree_on_random_graphs(g, variant):
    size, optima = brute_optima(g, variant)
    assert exhaustive_max(g, variant).optimum == size
    bb = branch_and_bound_max(g, variant)
    assert bb.optimum == size and bb.exact
    assert enumerate_optima(g, variant, size) == optima


def test_enumerate_optima_counts(st2):
    assert len(enumerate_optima(st2.graph, Variant.GENERAL_POSITION, 6, dist=st2.dist)) == 1
    assert enumerate_optima(st2.graph, Variant.TOTAL, 3, dist=st2.dist) == [st2.extremes]
    assert enumerate_optima(st2.graph, Variant.MUTUAL, 7, dist=st2.dist) == []


def test_enumerate_cap(st2):
    with pytest.raises(EnumerationCapExceeded):
        enumerate_optima(st2.graph, Variant.MUTUAL, 2, cap=5)


def test_greedy_is_valid_and_maximal(st2):
    for variant in ALL:
        M = greedy_lower_bound(st2.graph, variant, dist=st2.dist)
        assert is_valid(st2.graph, st2.dist, M, variant)
        if variant.anti_monotone:
            for v in set(range(15)) - set(M):
                assert not is_valid(st2.graph, st2.dist, M + [v], variant)


def test_budget_exhaustion_reports_bound(st3):
    with pytest.raises(BudgetExceeded) as info:
        branch_and_bound_max(st3.graph, Variant.MUTUAL, node_budget=50, dist=st3.dist)
    res = info.value.result
    assert not res.exact
    assert res.optimum == len(res.witness) == 12  # the seeded construction
    assert is_valid(st3.graph, st3.dist, res.witness, Variant.MUTUAL)


def test_budget_from_environment(st3, monkeypatch):
    monkeypatch.setenv(NODE_BUDGET_ENV, "10")
    with pytest.raises(BudgetExceeded):
        branch_and_bound_max(st3.graph, Variant.MUTUAL, dist=st3.dist)


def test_exhaustive_refuses_large_graphs(st3):
    with pytest.raises(GraphTooLarge):
        exhaustive_max(st3.graph, Variant.MUTUAL)


def test_invalid_seed_rejected(st2):
    with pytest.raises(ValueError):
        branch_and_bound_max(st2.graph, Variant.TOTAL, seed=(0, 1, 2, 3))


def test_explicit_seed_and_unrecognised_graph():
    g = cycle_graph(7)
    res = branch_and_bound_max(g, Variant.MUTUAL, seed=(0,))
    assert res.optimum == exhaustive_max(g, Variant.MUTUAL).optimum


def test_branch_order():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)])
    assert branch_order(g) == [1, 2, 3, 0]


def test_solve_triangle_methods():
    assert solve_triangle(1, "dual", method="exhaustive").optimum == 3
    assert solve_triangle(2, "outer").optimum == 4
