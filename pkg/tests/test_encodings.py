from __future__ import annotations

import io
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_

from stvis.constructions import closed_form
from stvis.encodings import (
    CnfFormula,
    add_at_most_k,
    decode_model,
    encode_gp_sat,
    encode_visibility_ilp,
    encode_visibility_sat,
    max_via_sat,
    read_dimacs,
    solve_cnf,
    solve_with_scipy,
    write_dimacs,
    write_lp,
    write_var_map,
)
from stvis.encodings.cnf import CnfError
from stvis.graph_core import CapExceeded, complete_graph
from stvis.search import exhaustive_max
from stvis.visibility import Variant, is_valid

from conftest import naive_sat

ALL = list(Variant)


# --- cardinality -------------------------------------------------------------

@pytest.mark.parametrize("m", range(1, 9))
def test_at_most_k_truth_table(m):
    for k in range(0, m + 1):
        cnf = CnfFormula()
        xs = [cnf.new_var(("x", i)) for i in range(m)]
        add_at_most_k(cnf, xs, k)
        for bits in itertools.product((False, True), repeat=m):
            fixed = dict(zip(xs, bits))
            assert naive_sat(cnf.clauses, cnf.num_vars, fixed) == (sum(bits) <= k)


def test_at_most_k_register_count():
    cnf = CnfFormula()
    xs = [cnf.new_var() for _ in range(6)]
    regs = add_at_most_k(cnf, xs, 2)
    assert sum(len(r) for r in regs) == 10
    with pytest.raises(CnfError):
        add_at_most_k(cnf, xs, -1)


# --- formula plumbing --------------------------------------------------------

def test_clause_hygiene():
    cnf = CnfFormula()
    a, b = cnf.new_var(), cnf.new_var()
    cnf.add_clause([a, a, -b])
    assert cnf.clauses == [(a, -b)]
    cnf.add_clause([a, -a])
    assert len(cnf.clauses) == 1
    with pytest.raises(CnfError):
        cnf.add_clause([])
    with pytest.raises(CnfError):
        cnf.add_clause([3])


def test_dimacs_round_trip_and_format(st1):
    cnf = encode_visibility_sat(st1.graph, Variant.MUTUAL, 4)
    buf = io.StringIO()
    write_dimacs(cnf, buf, comments=["mutual ell=4"])
    text = buf.getvalue()
    assert text.startswith("c mutual ell=4\np cnf 25 47\n")
    assert all(line.endswith(" 0") for line in text.splitlines()[2:])
    back = read_dimacs(io.StringIO(text))
    assert back.structure() == cnf.structure()
    with pytest.raises(CnfError):
        read_dimacs(io.StringIO("p cnf 2 2\n1 0\n"))
    with pytest.raises(CnfError):
        read_dimacs(io.StringIO("1 2 0\n"))


def test_var_map(st1):
    cnf = encode_visibility_sat(st1.graph, Variant.MUTUAL, 4)
    buf = io.StringIO()
    write_var_map(cnf, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 25
    assert lines[0] == "var 1 = x 0"
    kinds = {line.split()[3] for line in lines}
    assert kinds == {"x", "path", "counter"}


# --- solver ------------------------------------------------------------------

@st_.composite
def random_cnfs(draw):
    n = draw(st_.integers(1, 10))
    lit = st_.integers(1, n).flatmap(lambda v: st_.sampled_from([v, -v]))
    clauses = draw(st_.lists(st_.lists(lit, min_size=1, max_size=3), max_size=45))
    cnf = CnfFormula()
    for _ in range(n):
        cnf.new_var()
    for c in clauses:
        cnf.add_clause(c)
    return cnf


def _truth_table_sat(cnf):
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if cnf.satisfied_by([False, *bits]):
            return True
    return False


@settings(max_examples=300, deadline=None)
@given(random_cnfs())
def test_dpll_matches_truth_table(cnf):
    verdict = solve_cnf(cnf)
    assert verdict.sat == _truth_table_sat(cnf)
    if verdict.sat:
        assert cnf.satisfied_by(verdict.model)
    else:
        assert verdict.model is None


def test_dpll_on_larger_random_3cnf():
    rng = random.Random(11)
    for trial in range(40):
        n = 30
        cnf = CnfFormula()
        for _ in range(n):
            cnf.new_var()
        for _ in range(rng.randint(100, 150)):
            vs = rng.sample(range(1, n + 1), 3)
            cnf.add_clause([v if rng.random() < 0.5 else -v for v in vs])
        verdict = solve_cnf(cnf)
        assert verdict.sat == naive_sat(cnf.clauses, n)
        if verdict.sat:
            assert cnf.satisfied_by(verdict.model)


def test_dpll_is_deterministic(st2):
    cnf = encode_visibility_sat(st2.graph, Variant.MUTUAL, 6)
    a, b = solve_cnf(cnf), solve_cnf(cnf)
    assert a.model == b.model and a.decisions == b.decisions


# --- visibility encodings ----------------------------------------------------

def test_golden_counts_st1_mutual(st1):
    cnf = encode_visibility_sat(st1.graph, Variant.MUTUAL, 4)
    # 6 x-vars, 9 path auxiliaries (6 non-adjacent pairs), 10 counter registers
    assert cnf.num_vars == 25
    assert len(cnf.clauses) == 47
    kinds = [m[0] for m in cnf.meaning[1:]]
    assert (kinds.count("x"), kinds.count("path"), kinds.count("counter")) == (6, 9, 10)


@pytest.mark.parametrize("variant,ell,sat", [
    (Variant.MUTUAL, 4, True),
    (Variant.MUTUAL, 5, False),
    (Variant.GENERAL_POSITION, 3, True),
    (Variant.GENERAL_POSITION, 4, False),
])
def test_st1_verdicts(st1, variant, ell, sat):
    assert solve_cnf(encode_visibility_sat(st1.graph, variant, ell)).sat is sat


@pytest.mark.parametrize("variant,ell,sat", [
    (Variant.OUTER, 4, True),
    (Variant.OUTER, 5, False),
    (Variant.GENERAL_POSITION, 6, True),
    (Variant.GENERAL_POSITION, 7, False),
])
def test_st2_verdicts(st2, variant, ell, sat):
    assert solve_cnf(encode_visibility_sat(st2.graph, variant, ell, dist=st2.dist)).sat is sat


@pytest.mark.parametrize("variant", ALL)
def test_encoding_is_exact_on_st1(st1, variant):
    """With the x-variables pinned to a set M the formula is satisfiable iff M is valid and big enough."""
    g, d = st1.graph, st1.dist
    for ell in (2, 3, 4):
        cnf = encode_visibility_sat(g, variant, ell, dist=d)
        xs = {m[1]: var for var, m in enumerate(cnf.meaning) if m and m[0] == "x"}
        for size in range(7):
            for M in itertools.combinations(range(6), size):
                fixed = {xs[v]: v not in M for v in range(6)}
                expected = is_valid(g, d, M, variant) and size >= ell
                assert naive_sat(cnf.clauses, cnf.num_vars, fixed) == expected


@pytest.mark.parametrize("variant", ALL)
def test_models_decode_to_valid_sets(st2, variant):
    for ell in range(0, closed_form(variant, 2) + 1):
        cnf = encode_visibility_sat(st2.graph, variant, ell, dist=st2.dist)
        verdict = solve_cnf(cnf)
        assert verdict.sat
        M = decode_model(cnf, verdict.model)
        assert len(M) >= ell
        assert is_valid(st2.graph, st2.dist, M, variant)
    over = encode_visibility_sat(st2.graph, variant, closed_form(variant, 2) + 1, dist=st2.dist)
    assert not solve_cnf(over).sat


def test_total_drops_membership_literals(st1):
    cnf = encode_visibility_sat(st1.graph, Variant.TOTAL, 3)
    x_vars = {var for var, m in enumerate(cnf.meaning) if m and m[0] == "x"}
    path_vars = {var for var, m in enumerate(cnf.meaning) if m and m[0] == "path"}
    pair_clauses = [c for c in cnf.clauses if all(abs(l) in path_vars for l in c)]
    assert len(pair_clauses) == 6
    assert all(not x_vars & {abs(l) for l in c} for c in pair_clauses)


def test_gp_clause_shape(st1):
    cnf = encode_gp_sat(st1.graph, 3)
    triples = [c for c in cnf.clauses if len(c) == 3 and all(l > 0 for l in c)]
    # corner pairs have one vertex between them, midpoint pairs have two
    assert len(triples) == 3 * 1 + 3 * 2


def test_encoding_errors(st1):
    with pytest.raises(ValueError):
        encode_visibility_sat(st1.graph, Variant.MUTUAL, 7)
    with pytest.raises(ValueError):
        encode_gp_sat(st1.graph, 7)
    with pytest.raises(CapExceeded):
        encode_visibility_sat(st1.graph, Variant.MUTUAL, 3, path_cap=1)
    with pytest.raises(CapExceeded):
        encode_visibility_ilp(st1.graph, Variant.MUTUAL, path_cap=1)


@pytest.mark.parametrize("variant", ALL)
def test_emission_byte_stable(st2, variant):
    def emit():
        a, b = io.StringIO(), io.StringIO()
        write_dimacs(encode_visibility_sat(st2.graph, variant, 4), a)
        write_lp(encode_visibility_ilp(st2.graph, variant), b)
        return a.getvalue(), b.getvalue()

    assert emit() == emit()


# --- ILP ---------------------------------------------------------------------

def test_ilp_st1_mutual(st1):
    model = encode_visibility_ilp(st1.graph, Variant.MUTUAL)
    assert sum(1 for v in model.variables if v.startswith("x_")) == 6
    assert sum(1 for v in model.variables if v.startswith("z_")) == 9
    assert solve_with_scipy(model)[0] == 4


def test_ilp_k3():
    for variant in ALL:
        assert solve_with_scipy(encode_visibility_ilp(complete_graph(3), variant))[0] == 3


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("variant", ALL)
def test_ilp_matches_exhaustive(triangles, n, variant):
    st = triangles(n)
    model = encode_visibility_ilp(st.graph, variant, dist=st.dist)
    opt, values = solve_with_scipy(model)
    assert opt == exhaustive_max(st.graph, variant, dist=st.dist).optimum
    chosen = [int(name[2:]) for name, x in values.items() if name.startswith("x_") and x]
    assert is_valid(st.graph, st.dist, chosen, variant)


def test_lp_text(st1):
    buf = io.StringIO()
    write_lp(encode_visibility_ilp(st1.graph, Variant.MUTUAL), buf, comments=["demo"])
    text = buf.getvalue()
    assert text.startswith("\\ demo\nMaximize\n obj: x_0 + x_1")
    for section in ("Subject To\n", "Binary\n", "End\n"):
        assert section in text
    assert " c1: z_0_3_0 + x_1 <= 1\n" in text


def test_lp_rejects_unknown_variables():
    from stvis.encodings import LpModel
    model = LpModel()
    model.add_var("a")
    with pytest.raises(ValueError):
        model.add_constraint({"b": 1}, "<=", 1)
    with pytest.raises(ValueError):
        model.add_var("a")


# --- optimum sweep -----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("variant", ALL)
def test_sweep_matches_exhaustive(triangles, n, variant):
    st = triangles(n)
    expected = exhaustive_max(st.graph, variant, dist=st.dist).optimum
    for start in (None, 1, st.vertex_count):
        res = max_via_sat(st.graph, variant, dist=st.dist, start=start)
        assert res.optimum == expected == len(res.witness)
        assert res.exact and res.method == "sat"
