import math

import pytest
from hypothesis import given, settings, strategies as st

from resforge.complex import ChainComplex
from resforge.d4m import build_hb_d4m, build_split_d4m
from resforge.dnn1 import build_hb_dnn1, build_split_dnn1
from resforge.exactness import (CERTIFIED, PROBABILISTIC, SKIPPED, Budget, GradeResult, RankResult,
                                buchsbaum_eisenbud_report, grade_lower_bound, matrix_grade, matrix_rank,
                                minors_ideal, section_grade, verdict_for)
from resforge.matrix import PolyMatrix
from resforge.poly import VariableRegistry


def test_split_n4_certified():
    rep = buchsbaum_eisenbud_report(build_split_dnn1(4))
    assert rep.verdict == "acyclic-certified"
    assert [r.rank for r in rep.ranks] == [1, 3, 1]
    assert [g.bound for g in rep.grades] == [1, 3, 3]
    assert any("codimension" in n for n in rep.notes)


def test_certified_rank_via_vanishing_minors():
    c = build_split_dnn1(4)
    r = matrix_rank(c.d2, "certified")
    assert (r.rank, r.tag) == (3, CERTIFIED)
    assert matrix_rank(c.d2, "probabilistic").tag == PROBABILISTIC


@pytest.mark.parametrize("build,p", [(build_split_dnn1, 4), (build_split_dnn1, 6), (build_hb_dnn1, 4),
                                     (build_hb_dnn1, 6), (build_split_d4m, 2), (build_split_d4m, 3),
                                     (build_split_d4m, 4), (build_hb_d4m, 2), (build_hb_d4m, 3),
                                     (build_hb_d4m, 4)])
def test_expected_ranks_at_first_random_point(build, p):
    from resforge.complex import expected_ranks
    c = build(p, check=False)
    got = tuple(matrix_rank(d, seed=k, points=1).rank for k, d in enumerate(c.differentials))
    assert got == expected_ranks(c.fmt)


def test_grade_of_defect_triangle():
    reg = VariableRegistry()
    reg.declare_b(3)
    g = grade_lower_bound([reg.b(1, 2), reg.b(1, 3), reg.b(2, 3)], 3)
    assert (g.bound, g.tag) == (3, CERTIFIED)


def test_grade_edge_cases():
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    assert grade_lower_bound([reg.zero()], 1).bound == 0
    assert grade_lower_bound([x, reg.one()], 2).bound == math.inf
    assert grade_lower_bound([x * y], 2, Budget(seconds=0)).tag == SKIPPED


def test_section_grade_matches_certified_value():
    reg = VariableRegistry()
    x, y, z, w = reg.free("x", "y", "z", "w")
    gens = [x * z - y ** 2, y * w - z ** 2, x * w - y * z]
    spec = lambda mapping, target: [g.substitute(mapping, target) for g in gens]
    assert section_grade(spec, reg, 3, Budget(), 0, "test").bound == 2
    assert section_grade(spec, reg, 1, Budget(), 0, "test").bound == 2   # cut out: target + 1


def test_matrix_grade_generic_2x3():
    reg = VariableRegistry()
    reg.declare_X(2, 3)
    m = PolyMatrix(reg, [[reg.X(i, j) for j in range(1, 4)] for i in (1, 2)])
    assert len(minors_ideal(m, 2)) == 3
    g = matrix_grade(m, 2, 2)
    assert (g.bound, g.tag) == (2, CERTIFIED)


def test_hb_n8_grades_never_certified_at_default_budget():
    # documented limit: the large HB cases are probabilistic or skipped
    c = build_hb_dnn1(8, check=False)
    g = matrix_grade(c.d3, 1, 3, Budget(seconds=2, draws=1))
    assert g.tag in (PROBABILISTIC, SKIPPED)


def test_verdict_table():
    C, P, S = CERTIFIED, PROBABILISTIC, SKIPPED
    rk = lambda *t: [RankResult(r, tag) for r, tag in zip((1, 3, 1), t)]
    gr = lambda *t: [GradeResult(b, tag) for b, tag in t]
    ok = gr((1, C), (2, C), (3, C))
    assert verdict_for((True, True), (1, 3, 1), rk(C, C, C), ok) == "acyclic-certified"
    assert verdict_for((True, True), (1, 3, 1), rk(C, P, C), ok) == "acyclic-probable"
    assert verdict_for((True, True), (1, 3, 1), rk(C, C, C), gr((1, C), (2, P), (3, C))) == "acyclic-probable"
    assert verdict_for((True, False), (1, 3, 1), rk(C, C, C), ok) == "failed"
    assert verdict_for((True, True), (1, 2, 1), rk(C, C, C), ok) == "failed"
    assert verdict_for((True, True), (1, 3, 1), rk(C, C, C), gr((1, C), (1, C), (3, C))) == "failed"
    assert verdict_for((True, True), (1, 3, 1), rk(C, C, C), gr((1, C), (0, S), (3, C))) == "indeterminate"
    assert verdict_for((True, True), (1, 3, 1), rk(C, C, C), gr((1, C), (1, P), (3, C))) == "indeterminate"


def test_report_is_deterministic():
    a = buchsbaum_eisenbud_report(build_split_d4m(2), seed=5).to_dict()
    b = buchsbaum_eisenbud_report(build_split_d4m(2), seed=5).to_dict()
    assert a == b


def test_broken_complex_fails():
    c = build_split_dnn1(4)
    g = [list(r) for r in c.d1.grid]
    g[0][0] = g[0][0] + 1
    bad = ChainComplex(c.fmt, PolyMatrix(c.reg, g), c.d2, c.d3)
    assert buchsbaum_eisenbud_report(bad).verdict == "failed"


def test_skipped_checks_are_tagged():
    rep = buchsbaum_eisenbud_report(build_split_dnn1(4), checks=("compose",))
    assert {r.tag for r in rep.ranks} == {SKIPPED}
    assert {g.tag for g in rep.grades} == {SKIPPED}
    assert rep.verdict == "indeterminate"


def test_env_budget_zero_skips(monkeypatch):
    monkeypatch.setenv("RESFORGE_BUDGET_MS", "0")
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    assert grade_lower_bound([x, y], 2).tag == SKIPPED


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), min_size=1, max_size=4),
       st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_grade_bound_monotone(terms, extra):
    reg = VariableRegistry()
    x, y, z = reg.free("x", "y", "z")
    vs = (x, y, z)
    gens = [c * vs[a] * vs[b] + vs[(a + 1) % 3] for a, b, c in ((a % 3, b % 3, c) for a, b, c in terms)]
    more = gens + [vs[extra[0] % 3] ** (extra[1] + 1)]
    assert grade_lower_bound(more, 3).bound >= grade_lower_bound(gens, 3).bound
