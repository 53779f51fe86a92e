from __future__ import annotations

import itertools

import networkx as nx
import pytest

from stvis.graph_core import Graph
from stvis.sierpinski import build_sierpinski_triangle

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def triangles():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = build_sierpinski_triangle(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def st1(triangles):
    return triangles(1)


@pytest.fixture(scope="session")
def st2(triangles):
    return triangles(2)


@pytest.fixture(scope="session")
def st3(triangles):
    return triangles(3)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges())
    return h


def brute_visible(h: nx.Graph, M, u, v) -> bool:
    """Independent oracle: enumerate every shortest path with networkx."""
    blocked = set(M) - {u, v}
    return any(not (set(p[1:-1]) & blocked) for p in nx.all_shortest_paths(h, u, v))


def brute_valid(h: nx.Graph, M, variant) -> bool:
    """Direct transcription of the five set definitions over networkx paths."""
    from stvis.visibility import Variant

    M = set(M)
    nodes = sorted(h.nodes)
    if variant is Variant.GENERAL_POSITION:
        d = dict(nx.all_pairs_shortest_path_length(h))
        return not any(d[u][w] + d[w][v] == d[u][v]
                       for u, v in itertools.combinations(sorted(M), 2) for w in M - {u, v})
    for u, v in itertools.combinations(nodes, 2):
        a, b = u in M, v in M
        need = {
            Variant.MUTUAL: a and b,
            Variant.TOTAL: True,
            Variant.OUTER: a or b,
            Variant.DUAL: a == b,
        }[variant]
        if need and not brute_visible(h, M, u, v):
            return False
    return True


def naive_sat(clauses, num_vars, fixed=None) -> bool:
    """Textbook recursive DPLL over clause lists; deliberately unlike the package solver."""
    assignment = dict(fixed or {})

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = [l for l in c if l != -lit]
                if not c:
                    return None
            out.append(c)
        return out

    cls = [list(c) for c in clauses]
    for var, val in assignment.items():
        cls = simplify(cls, var if val else -var)
        if cls is None:
            return False

    def rec(cls):
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            cls = simplify(cls, unit)
            if cls is None:
                return False
        if not cls:
            return True
        lit = cls[0][0]
        for choice in (lit, -lit):
            nxt = simplify(cls, choice)
            if nxt is not None and rec(nxt):
                return True
        return False

    return rec(cls)


def record_acceptance(number: int, text: str, passed: bool) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
