"""Exact maximum-set search: brute force, branch and bound, optimum enumeration."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, replace

from .graph_core import DistanceMatrix, Graph, all_pairs_distances, from_mask
from .sierpinski import build_sierpinski_triangle, recognize_triangle
from .visibility import Variant, VisibilityOracle, validate_set

DEFAULT_VERTEX_LIMIT = 20
DEFAULT_ENUM_CAP = 100_000
NODE_BUDGET_ENV = "STVIS_NODE_BUDGET"


@dataclass(frozen=True)
class SearchResult:
    variant: Variant
    optimum: int
    witness: tuple[int, ...]
    nodes_explored: int
    exact: bool = True
    method: str = ""
    all_optima: list[tuple[int, ...]] | None = None


class GraphTooLarge(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Search stopped early; ``result`` holds the best set found, as a lower bound."""

    def __init__(self, result: SearchResult):
        super().__init__(f"node budget exhausted after {result.nodes_explored} nodes; "
                         f"best {result.variant.value} set so far has {result.optimum} vertices")
        self.result = result


class EnumerationCapExceeded(RuntimeError):
    pass


def default_node_budget() -> int | None:
    raw = os.environ.get(NODE_BUDGET_ENV)
    return int(raw) if raw else None


def _oracle(g: Graph, dist: DistanceMatrix | None) -> VisibilityOracle:
    return VisibilityOracle(g, dist if dist is not None else all_pairs_distances(g))


def mask_is_valid(oracle: VisibilityOracle, mask: int, variant: Variant) -> bool:
    """Full (non-incremental) validity test of the set encoded by ``mask``."""
    n = oracle.n
    if variant is Variant.GENERAL_POSITION:
        members = from_mask(mask)
        for i, x in enumerate(members):
            for y in members[i + 1:]:
                if oracle.interior[x, y] & mask:
                    return False
        return True
    requires = variant.requires
    for u in range(n):
        u_in = bool(mask >> u & 1)
        for v in range(u + 1, n):
            if requires(u_in, bool(mask >> v & 1)) and not oracle.visible(u, v, mask):
                return False
    return True


def exhaustive_max(g: Graph, variant: Variant | str, vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                   count_optima: bool = False, dist: DistanceMatrix | None = None) -> SearchResult:
    """Try subsets from largest to smallest; the first size with a valid set is optimal."""
    variant = Variant.parse(variant)
    n = g.vertex_count
    if n > vertex_limit:
        raise GraphTooLarge(f"{n} vertices exceeds the exhaustive limit {vertex_limit}; "
                            "use branch_and_bound_max instead")
    oracle = _oracle(g, dist)
    checked = 0
    for size in range(n, -1, -1):
        found: list[tuple[int, ...]] = []
        for combo in itertools.combinations(range(n), size):
            checked += 1
            mask = 0
            for v in combo:
                mask |= 1 << v
            if mask_is_valid(oracle, mask, variant):
                found.append(combo)
                if not count_optima:
                    break
        if found:
            return SearchResult(variant, size, found[0], checked, True, "exhaustive",
                                found if count_optima else None)
    raise AssertionError("the empty set is always valid")


class _Checker:
    """Incremental feasibility: can vertex w join a currently valid set S?"""

    def __init__(self, oracle: VisibilityOracle, variant: Variant):
        self.o = oracle
        self.variant = variant
        self.all_mask = (1 << oracle.n) - 1
        self.can_add = {
            Variant.MUTUAL: self._add_mutual,
            Variant.GENERAL_POSITION: self._add_gp,
            Variant.OUTER: self._add_outer,
            Variant.TOTAL: self._add_total,
            Variant.DUAL: self._add_mutual,
        }[variant]

    def _recheck_shadow(self, S: int, members, w: int, targets: int) -> bool:
        """Pairs (x, y), x in S, y in targets, that have w strictly between them."""
        o = self.o
        Sw = S | (1 << w)
        shadow = o.shadow
        for x in members:
            m = shadow[x][w] & targets
            while m:
                low = m & -m
                y = low.bit_length() - 1
                m ^= low
                if not o.visible(x, y, Sw):
                    return False
        return True

    def _add_mutual(self, S: int, members, w: int) -> bool:
        o = self.o
        Sw = S | (1 << w)
        for y in members:
            if not o.visible(w, y, Sw):
                return False
        return self._recheck_shadow(S, members, w, S)

    def _add_gp(self, S: int, members, w: int) -> bool:
        o = self.o
        shadow = o.shadow
        for x in members:
            if shadow[x][w] & S or o.between_mask(x, w) & S:
                return False
        return True

    def _add_outer(self, S: int, members, w: int) -> bool:
        o = self.o
        Sw = S | (1 << w)
        rest = self.all_mask & ~Sw
        while rest:
            low = rest & -rest
            z = low.bit_length() - 1
            rest ^= low
            if not o.visible(w, z, Sw):
                return False
        return self._recheck_shadow(S, members, w, self.all_mask)

    def _add_total(self, S: int, members, w: int) -> bool:
        o = self.o
        Sw = S | (1 << w)
        for u, v in o.through[w]:
            if not o.visible(u, v, Sw):
                return False
        return True

    def excluded_ok(self, S: int, X: int, w: int) -> bool:
        """Dual side: w joins the excluded set X; every X-pair with w must stay visible."""
        o = self.o
        m = X
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            if not o.visible(w, b, S):
                return False
        return True

    def include_keeps_excluded(self, S: int, X: int, w: int) -> bool:
        """Dual side: after w joins S, X-pairs with w between them must stay visible."""
        return self._recheck_shadow(S, from_mask(X), w, X)


def branch_order(g: Graph) -> list[int]:
    return sorted(range(g.vertex_count), key=lambda v: (-g.degree(v), v))


def _seed(g: Graph, variant: Variant, dist: DistanceMatrix | None) -> tuple[int, ...]:
    n = recognize_triangle(g)
    if n is not None and n >= 1:
        from .constructions import construct
        return construct(variant, n).vertices
    return tuple(greedy_lower_bound(g, variant, dist))


def branch_and_bound_max(g: Graph, variant: Variant | str, node_budget: int | None = None,
                         dist: DistanceMatrix | None = None, seed: tuple[int, ...] | None = None
                         ) -> SearchResult:
    """Depth-first include/exclude search; raises BudgetExceeded rather than guessing.

    The incumbent starts at ``seed`` (by default the explicit construction when
    ``g`` is a generated ST_3^n, else a greedy set), so the search only has to
    find a strictly larger set or prove none exists.
    """
    variant = Variant.parse(variant)
    if node_budget is None:
        node_budget = default_node_budget()
    if dist is None:
        dist = all_pairs_distances(g)
    oracle = VisibilityOracle(g, dist)
    checker = _Checker(oracle, variant)
    order = branch_order(g)
    best = list(seed if seed is not None else _seed(g, variant, dist))
    if validate_set(g, dist, best, variant) is not None:
        raise ValueError("seed set is not valid for this variant")
    nodes = 0

    def stop():
        raise BudgetExceeded(SearchResult(variant, len(best), tuple(sorted(best)), nodes,
                                          False, "bnb"))

    if variant is Variant.DUAL:
        nodes = _dual_search(g, checker, order, best, node_budget, stop)
    else:
        can_add = checker.can_add

        def expand(S: int, members: list[int], cands: list[int]) -> None:
            nonlocal nodes
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                stop()
            if len(members) > len(best):
                best[:] = members
            size = len(members)
            for i, v in enumerate(cands):
                if size + len(cands) - i <= len(best):
                    return
                S2 = S | (1 << v)
                grown = members + [v]
                expand(S2, grown, [w for w in cands[i + 1:] if can_add(S2, grown, w)])

        expand(0, [], [v for v in order if checker.can_add(0, [], v)])
    witness = tuple(sorted(best))
    return SearchResult(variant, len(witness), witness, nodes, True, "bnb")


def _dual_search(g: Graph, checker: _Checker, order: list[int], best: list[int],
                 node_budget: int | None, stop) -> int:
    nodes = 0
    n = len(order)

    def visit(i: int, S: int, members: list[int], X: int) -> None:
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            stop()
        if len(members) + (n - i) <= len(best):
            return
        if i == n:
            best[:] = members
            return
        v = order[i]
        if checker.can_add(S, members, v) and checker.include_keeps_excluded(S, X, v):
            visit(i + 1, S | (1 << v), members + [v], X)
        if checker.excluded_ok(S, X, v):
            visit(i + 1, S, members, X | (1 << v))

    visit(0, 0, [], 0)
    return nodes


def enumerate_optima(g: Graph, variant: Variant | str, size: int, cap: int = DEFAULT_ENUM_CAP,
                     dist: DistanceMatrix | None = None) -> list[tuple[int, ...]]:
    """All valid sets of exactly ``size`` vertices, in lexicographic order."""
    variant = Variant.parse(variant)
    if dist is None:
        dist = all_pairs_distances(g)
    oracle = VisibilityOracle(g, dist)
    n = g.vertex_count
    out: list[tuple[int, ...]] = []

    def emit(members) -> None:
        if len(out) >= cap:
            raise EnumerationCapExceeded(f"more than {cap} valid sets of size {size}")
        out.append(tuple(members))

    if variant is Variant.DUAL:
        for combo in itertools.combinations(range(n), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if mask_is_valid(oracle, mask, variant):
                emit(combo)
        return out

    can_add = _Checker(oracle, variant).can_add

    def expand(S: int, members: list[int], cands: list[int]) -> None:
        if len(members) == size:
            emit(members)
            return
        for i, v in enumerate(cands):
            if len(members) + len(cands) - i < size:
                return
            S2 = S | (1 << v)
            grown = members + [v]
            expand(S2, grown, [w for w in cands[i + 1:] if can_add(S2, grown, w)])

    expand(0, [], [v for v in range(n) if can_add(0, [], v)])
    return out


def greedy_lower_bound(g: Graph, variant: Variant | str, dist: DistanceMatrix | None = None) -> list[int]:
    """Add vertices in index order whenever the set stays valid (maximal, not maximum)."""
    variant = Variant.parse(variant)
    oracle = _oracle(g, dist)
    mask = 0
    for v in range(g.vertex_count):
        if mask_is_valid(oracle, mask | (1 << v), variant):
            mask |= 1 << v
    return from_mask(mask)


def solve_triangle(n: int, variant: Variant | str, method: str = "bnb", **kwargs) -> SearchResult:
    st = build_sierpinski_triangle(n)
    if method == "exhaustive":
        return exhaustive_max(st.graph, variant, dist=st.dist, **kwargs)
    return branch_and_bound_max(st.graph, variant, dist=st.dist, **kwargs)
