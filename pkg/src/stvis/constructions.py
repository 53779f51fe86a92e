"""Explicit optimal sets for ST_3^n, one builder per variant.

Every builder validates its output before returning it, so a constructed set
doubles as a lower-bound certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph_core import GraphError, interval
from .sierpinski import (
    SierpinskiTriangle,
    build_sierpinski_triangle,
    enumerate_h2_copies,
    proper_vertices,
)
from .visibility import Variant, validate_set


class ConstructionError(AssertionError):
    pass


@dataclass(frozen=True)
class ConstructedSet:
    variant: Variant
    n: int
    vertices: tuple[int, ...]
    expected_size: int

    def __len__(self) -> int:
        return len(self.vertices)


def closed_form(variant: Variant | str, n: int) -> int:
    """Optimum size for ``variant`` on ST_3^n, n >= 1."""
    variant = Variant.parse(variant)
    if n < 1:
        raise ValueError("closed forms are stated for n >= 1")
    if variant is Variant.MUTUAL:
        return 3 ** (n - 1) + 3
    if variant is Variant.GENERAL_POSITION:
        return 3 if n == 1 else 3 ** (n - 1) + 3
    if variant is Variant.OUTER:
        return 3 if n == 1 else 3 ** (n - 2) + 3
    if variant is Variant.TOTAL:
        return 3
    return 3 if n == 1 else 4


def _triangle(n: int, st: SierpinskiTriangle | None) -> SierpinskiTriangle:
    if n < 1:
        raise GraphError("constructions are defined for n >= 1")
    if st is None:
        return build_sierpinski_triangle(n)
    if st.n != n:
        raise GraphError(f"passed ST_3^{st.n} for n={n}")
    return st


def _finish(st: SierpinskiTriangle, variant: Variant, vertices) -> ConstructedSet:
    vs = tuple(sorted(set(vertices)))
    expected = closed_form(variant, st.n)
    if len(vs) != expected:
        raise ConstructionError(f"{variant.value} set for n={st.n} has {len(vs)} vertices, expected {expected}")
    violation = validate_set(st.graph, st.dist, vs, variant)
    if violation is not None:
        raise ConstructionError(f"{variant.value} construction for n={st.n} is invalid: {violation}")
    return ConstructedSet(variant, st.n, vs, expected)


def _proper_union(st: SierpinskiTriangle, one_per_copy: bool = False) -> set[int]:
    out: set[int] = set()
    for addr in enumerate_h2_copies(st):
        proper = proper_vertices(st, addr)
        out.update(proper[:1] if one_per_copy else proper)
    return out


def _mv_n1(st: SierpinskiTriangle) -> list[int]:
    # two corners plus the two midpoints that are not between them
    a, b, _ = st.extremes
    side = interval(st.graph, st.dist, a, b)
    others = [v for v in range(st.vertex_count) if v not in st.extremes and v not in side]
    return [a, b, *others]


def construct_mv(n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    st = _triangle(n, st)
    if n == 1:
        return _finish(st, Variant.MUTUAL, _mv_n1(st))
    return _finish(st, Variant.MUTUAL, _proper_union(st) | set(st.extremes))


def construct_gp(n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    st = _triangle(n, st)
    if n == 1:
        return _finish(st, Variant.GENERAL_POSITION, st.extremes)
    return _finish(st, Variant.GENERAL_POSITION, _proper_union(st) | set(st.extremes))


def construct_outer(n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    st = _triangle(n, st)
    if n == 1:
        return _finish(st, Variant.OUTER, st.extremes)
    return _finish(st, Variant.OUTER, _proper_union(st, one_per_copy=True) | set(st.extremes))


def construct_total(n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    st = _triangle(n, st)
    return _finish(st, Variant.TOTAL, st.extremes)


def construct_dual(n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    st = _triangle(n, st)
    if n == 1:
        return _finish(st, Variant.DUAL, st.extremes)
    g, dist = st.graph, st.dist
    p0, p1, p2 = st.extremes
    side = interval(g, dist, p0, p1)
    u = next(w for w in g.adjacency[p0] if w in side)
    for v in g.adjacency[p2]:
        quad = (p0, u, p2, v)
        if validate_set(g, dist, quad, Variant.DUAL) is None:
            return _finish(st, Variant.DUAL, quad)
    raise ConstructionError(f"no neighbour of {p2} completes a dual set for n={n}")


BUILDERS = {
    Variant.MUTUAL: construct_mv,
    Variant.GENERAL_POSITION: construct_gp,
    Variant.OUTER: construct_outer,
    Variant.TOTAL: construct_total,
    Variant.DUAL: construct_dual,
}


def construct(variant: Variant | str, n: int, st: SierpinskiTriangle | None = None) -> ConstructedSet:
    return BUILDERS[Variant.parse(variant)](n, st)
