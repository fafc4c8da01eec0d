import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from resforge.groebner import (Caps, ResourceCapExceeded, buchberger, ideal_codim, is_groebner,
                               min_hitting_set, normal_form)
from resforge.poly import VariableRegistry


def ring(names="xyz", order="degrevlex"):
    reg = VariableRegistry(order)
    return reg, reg.free(*names)


def strs(gb):
    return sorted(str(g) for g in gb.gens)


def test_frozen_lex_basis():
    reg, (x, y) = ring("xy", "lex")
    gb = buchberger([x * y - 1, y ** 2 - 1])
    assert strs(gb) == ["x - y", "y^2 - 1"]
    assert is_groebner(gb)


def test_monomial_ideal_is_its_own_basis():
    reg, (x, y, z) = ring()
    assert strs(buchberger([x ** 2, y ** 2])) == ["x^2", "y^2"]


def test_normal_form_frozen():
    reg, (x, y, z) = ring()
    gb = buchberger([x * y - 1])
    assert normal_form(x ** 2 * y, gb) == x
    gb3 = buchberger([3 * x * y - 1])
    assert normal_form(x ** 2 * y * Fraction(1, 3) + y, gb3) == x * Fraction(1, 9) + y


def test_unit_and_zero_ideals():
    reg, (x, y, z) = ring()
    assert buchberger([x + 1, x]).is_unit()
    assert ideal_codim(buchberger([x + 1, x])) == math.inf
    assert ideal_codim(buchberger([reg.zero()])) == 0


@pytest.mark.parametrize("gens,codim", [
    (lambda x, y, z: [x * y, x * z], 1),
    (lambda x, y, z: [x, y], 2),
    (lambda x, y, z: [x * y, y * z, z * x], 2),
    (lambda x, y, z: [x - y, y - z, z ** 2], 3),
    (lambda x, y, z: [x ** 2 - y * z], 1),
])
def test_codimension_frozen(gens, codim):
    reg, v = ring()
    assert ideal_codim(buchberger(gens(*v))) == codim


def test_defect_triangle_codim_three():
    reg = VariableRegistry()
    reg.declare_b(3)
    gb = buchberger([reg.b(1, 2), reg.b(1, 3), reg.b(2, 3)])
    assert ideal_codim(gb) == 3


def test_twisted_cubic_codim_two():
    reg, (x, y, z, w) = ring("xyzw")
    gb = buchberger([x * z - y ** 2, y * w - z ** 2, x * w - y * z])
    assert ideal_codim(gb) == 2


def test_min_hitting_set():
    fs = frozenset
    assert min_hitting_set([fs({0, 1}), fs({1, 2}), fs({2, 0})]) == 2
    assert min_hitting_set([fs({0}), fs({1}), fs({2})]) == 3
    assert min_hitting_set([]) == 0


def test_caps_raise_instead_of_partial_result():
    reg, (x, y, z) = ring()
    gens = [x ** 3 - y * z, y ** 3 - x * z, z ** 3 - x * y, x * y * z - 1]
    with pytest.raises(ResourceCapExceeded):
        buchberger(gens, caps=Caps(max_pairs=1))


def test_modular_run_has_same_leading_monomials():
    reg, (x, y, z) = ring()
    gens = [x ** 2 - 2 * y * z, y ** 2 - 3 * x * z + 1, z ** 3 - x]
    q = buchberger(gens)
    p = buchberger(gens, modulus=2 ** 31 - 1)
    assert sorted(q.leading_monomials()) == sorted(p.leading_monomials())


def test_matches_sympy_on_random_ideals():
    sympy = pytest.importorskip("sympy")
    sx, sy, sz = sympy.symbols("x y z")
    rng = random.Random(3)
    reg, (x, y, z) = ring()
    for _ in range(25):
        gens = []
        for _ in range(rng.randint(1, 3)):
            p = reg.zero()
            for _ in range(rng.randint(1, 3)):
                p = p + rng.randint(-3, 3) * x ** rng.randint(0, 2) * y ** rng.randint(0, 2) * z ** rng.randint(0, 1)
            gens.append(p)
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        ours = buchberger(gens)
        theirs = sympy.groebner([sympy.sympify(str(g).replace("^", "**")) for g in gens],
                                sx, sy, sz, order="grevlex")
        to_sym = [sympy.expand(sympy.sympify(str(g).replace("^", "**"))) for g in ours.gens]
        assert {sympy.Poly(g, sx, sy, sz).monic().as_expr() for g in to_sym} == \
               {sympy.Poly(g, sx, sy, sz).monic().as_expr() for g in theirs.exprs}


# ---------------------------------------------------------------- properties

small = st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)),
                 min_size=1, max_size=3)


def build(reg, v, terms):
    x, y, z = v
    p = reg.zero()
    for c, a, b, e in terms:
        p = p + c * x ** a * y ** b * z ** e
    return p


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=3), small)
def test_generators_reduce_to_zero_and_nf_is_idempotent(gen_terms, f_terms):
    reg, v = ring()
    gens = [g for g in (build(reg, v, t) for t in gen_terms) if not g.is_zero()]
    if not gens:
        return
    gb = buchberger(gens)
    assert is_groebner(gb)
    for g in gens:
        assert normal_form(g, gb).is_zero()
    f = build(reg, v, f_terms)
    r = normal_form(f, gb)
    assert normal_form(r, gb) == r
    assert normal_form(f - r, gb).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=3), small)
def test_codim_does_not_drop_when_adding_generators(gen_terms, extra):
    reg, v = ring()
    gens = [g for g in (build(reg, v, t) for t in gen_terms) if not g.is_zero()]
    e = build(reg, v, extra)
    if not gens or e.is_zero():
        return
    assert ideal_codim(buchberger(gens + [e])) >= ideal_codim(buchberger(gens))
