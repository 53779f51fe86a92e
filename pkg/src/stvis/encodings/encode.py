"""SAT and ILP models of the visibility problems.

SAT polarity follows the usual reduction: x_v is FALSE iff v is in the set,
and at most n - ell of the x_v may be true. The ILP uses the direct polarity
x_v = 1 iff v is in the set. ``decode_model`` is the only place that flips.

Adjacent pairs are skipped: their single shortest path has no internal
vertex, so the visibility clause would be satisfied outright.
"""

from __future__ import annotations

import itertools

from ..graph_core import DistanceMatrix, Graph, all_pairs_distances, enumerate_shortest_paths
from ..search import SearchResult
from ..sierpinski import recognize_triangle
from ..visibility import Variant, validate_set
from .cnf import CnfFormula, add_at_most_k
from .dpll import solve_cnf
from .lp import LpModel

DEFAULT_ENCODING_PATH_CAP = 10**5


def _pair_paths(g: Graph, dist: DistanceMatrix, path_cap: int):
    """Yield (u, v, internal-vertex tuples) for every non-adjacent pair u < v."""
    n = g.vertex_count
    for u in range(n):
        for v in range(u + 1, n):
            if dist.rows[u][v] < 2:
                continue
            paths = enumerate_shortest_paths(g, u, v, cap=path_cap, dist=dist)
            yield u, v, [p[1:-1] for p in paths]


def _cardinality(cnf: CnfFormula, xs: list[int], ell: int) -> None:
    n = len(xs)
    if ell > n:
        raise ValueError(f"target size {ell} exceeds the {n} available vertices")
    add_at_most_k(cnf, xs, n - ell)


def encode_visibility_sat(g: Graph, variant: Variant | str, ell: int,
                          path_cap: int = DEFAULT_ENCODING_PATH_CAP,
                          dist: DistanceMatrix | None = None) -> CnfFormula:
    variant = Variant.parse(variant)
    if variant is Variant.GENERAL_POSITION:
        return encode_gp_sat(g, ell, dist)
    if ell < 0 or ell > g.vertex_count:
        raise ValueError(f"target size {ell} outside 0..{g.vertex_count}")
    if dist is None:
        dist = all_pairs_distances(g)
    cnf = CnfFormula()
    xs = [cnf.new_var(("x", v)) for v in range(g.vertex_count)]
    for u, v, internals in _pair_paths(g, dist, path_cap):
        zs = []
        for index, inner in enumerate(internals):
            z = cnf.new_var(("path", u, v, index))
            for w in inner:
                cnf.add_clause([-z, xs[w]])
            cnf.add_clause([z] + [-xs[w] for w in inner])
            zs.append(z)
        xu, xv = xs[u], xs[v]
        if variant is Variant.TOTAL:
            cnf.add_clause(zs)
            continue
        cnf.add_clause([xu, xv, *zs])
        if variant is Variant.OUTER:
            cnf.add_clause([xu, -xv, *zs])
            cnf.add_clause([-xu, xv, *zs])
        elif variant is Variant.DUAL:
            cnf.add_clause([-xu, -xv, *zs])
    _cardinality(cnf, xs, ell)
    return cnf


def encode_gp_sat(g: Graph, ell: int, dist: DistanceMatrix | None = None) -> CnfFormula:
    if ell < 0 or ell > g.vertex_count:
        raise ValueError(f"target size {ell} outside 0..{g.vertex_count}")
    if dist is None:
        dist = all_pairs_distances(g)
    rows = dist.rows
    n = g.vertex_count
    cnf = CnfFormula()
    xs = [cnf.new_var(("x", v)) for v in range(n)]
    for u, v in itertools.combinations(range(n), 2):
        duv = rows[u][v]
        for w in range(n):
            if w != u and w != v and rows[u][w] + rows[w][v] == duv:
                cnf.add_clause([xs[u], xs[v], xs[w]])
    _cardinality(cnf, xs, ell)
    return cnf


def decode_model(cnf: CnfFormula, model) -> tuple[int, ...]:
    """Vertices whose x-variable is false in ``model``."""
    out = []
    for var in range(1, cnf.num_vars + 1):
        meaning = cnf.meaning[var]
        if meaning is not None and meaning[0] == "x" and not model[var]:
            out.append(meaning[1])
    return tuple(sorted(out))


def x_name(v: int) -> str:
    return f"x_{v}"


def encode_visibility_ilp(g: Graph, variant: Variant | str,
                          path_cap: int = DEFAULT_ENCODING_PATH_CAP,
                          dist: DistanceMatrix | None = None) -> LpModel:
    variant = Variant.parse(variant)
    if dist is None:
        dist = all_pairs_distances(g)
    model = LpModel()
    xs = [model.add_var(x_name(v)) for v in range(g.vertex_count)]
    model.objective = {x: 1 for x in xs}
    if variant is Variant.GENERAL_POSITION:
        rows = dist.rows
        for u, v in itertools.combinations(range(g.vertex_count), 2):
            for w in range(g.vertex_count):
                if w != u and w != v and rows[u][w] + rows[w][v] == rows[u][v]:
                    model.add_constraint({xs[u]: 1, xs[v]: 1, xs[w]: 1}, "<=", 2)
        return model
    for u, v, internals in _pair_paths(g, dist, path_cap):
        zs = []
        for index, inner in enumerate(internals):
            z = model.add_var(f"z_{u}_{v}_{index}")
            for w in inner:
                model.add_constraint({z: 1, xs[w]: 1}, "<=", 1)
            zs.append(z)
        minus_z = {z: -1 for z in zs}
        xu, xv = xs[u], xs[v]
        if variant is Variant.TOTAL:
            model.add_constraint({z: 1 for z in zs}, ">=", 1)
            continue
        model.add_constraint({xu: 1, xv: 1, **minus_z}, "<=", 1)
        if variant is Variant.OUTER:
            # x_u + (1 - x_v) - sum z <= 1 and its mirror
            model.add_constraint({xu: 1, xv: -1, **minus_z}, "<=", 0)
            model.add_constraint({xu: -1, xv: 1, **minus_z}, "<=", 0)
        elif variant is Variant.DUAL:
            # (1 - x_u) + (1 - x_v) - sum z <= 1
            model.add_constraint({xu: -1, xv: -1, **minus_z}, "<=", -1)
    return model


def max_via_sat(g: Graph, variant: Variant | str, path_cap: int = DEFAULT_ENCODING_PATH_CAP,
                dist: DistanceMatrix | None = None, start: int | None = None) -> SearchResult:
    """Exact optimum by feasibility probes on ell.

    Probing starts at ``start`` (default: closed form + 1 for a recognised
    ST_3^n, else the vertex count). From an UNSAT start the sweep walks down
    to the first SAT ell; from a SAT start it walks up to the first UNSAT
    one. Either way the answer is bracketed by a SAT ell and UNSAT at ell + 1.
    """
    variant = Variant.parse(variant)
    if dist is None:
        dist = all_pairs_distances(g)
    n_vertices = g.vertex_count
    if start is None:
        start = n_vertices
        n = recognize_triangle(g)
        if n is not None and n >= 1:
            from ..constructions import closed_form
            start = min(start, closed_form(variant, n) + 1)
    work = 0

    def probe(ell: int):
        nonlocal work
        cnf = encode_visibility_sat(g, variant, ell, path_cap, dist)
        verdict = solve_cnf(cnf)
        work += verdict.decisions
        if not verdict.sat:
            return None
        witness = decode_model(cnf, verdict.model)
        if len(witness) < ell:
            raise AssertionError("decoded set smaller than the cardinality bound")
        violation = validate_set(g, dist, witness, variant)
        if violation is not None:
            raise AssertionError(f"SAT model decodes to an invalid set: {violation}")
        return witness

    witness = probe(start)
    if witness is not None:
        ell = start
        while ell < n_vertices:
            bigger = probe(ell + 1)
            if bigger is None:
                break
            ell, witness = ell + 1, bigger
    else:
        ell = start - 1
        while (witness := probe(ell)) is None:
            ell -= 1
    # a valid set of size s satisfies every probe with ell <= s, so UNSAT at ell + 1 pins |witness|
    if len(witness) != ell:
        raise AssertionError(f"witness has {len(witness)} vertices but the optimum is {ell}")
    return SearchResult(variant, ell, witness, work, True, "sat")
