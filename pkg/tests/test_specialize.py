import pytest

from golden import hilbert_burch_example
from resforge.complex import compose_check
from resforge.dnn1 import build_hb_dnn1
from resforge.exactness import Budget
from resforge.matrix import PolyMatrix
from resforge.poly import VariableRegistry
from resforge.specialize import (SpecializationError, expected_ideal_thm71, expected_ideal_thm72,
                                 maximal_minors, minimality_check_thm71, minimality_check_thm72,
                                 pair_partition, same_set_up_to_sign, specialize_thm71, specialize_thm72)


def generic(n, cols):
    reg = VariableRegistry()
    reg.declare_X(n, cols)
    return PolyMatrix(reg, [[reg.X(i, j) for j in range(1, cols + 1)] for i in range(1, n + 1)])


def test_example_matrix_ideal():
    reg = VariableRegistry()
    M = hilbert_burch_example(reg)
    sp = specialize_thm71(M, 1, 2)
    x, y, v, w, a, b, c, Z = (reg.var(n) for n in ("x", "y", "v", "w", "a", "b", "c", "Z"))
    assert same_set_up_to_sign(sp.ideal, [Z * x * y * w, Z * x * y * c, y * (c * v - w * a), x * b * w])
    assert sp.complex.d3[3, 0] == Z
    assert minimality_check_thm71(M, 1, 2) is True


def test_generic_4x3_pair_12():
    M = generic(4, 3)
    sp = specialize_thm71(M, 1, 2)
    Y = maximal_minors(M)
    Z = M.reg.Z()
    assert same_set_up_to_sign(sp.ideal, [Y[0], Y[1], Z * Y[2], Z * Y[3]])
    assert minimality_check_thm71(M, 1, 2) is True


@pytest.mark.parametrize("k,r", [(1, 3), (2, 4), (1, 4), (3, 4)])
def test_last_entry_of_d3_is_Z(k, r):
    M = generic(4, 3)
    sp = specialize_thm71(M, k, r)
    assert sp.complex.d3[3, 0] == M.reg.Z()
    assert same_set_up_to_sign(sp.ideal, expected_ideal_thm71(M, k, r))


def test_n6_generic():
    M = generic(6, 5)
    sp = specialize_thm71(M, 2, 5)
    assert sp.notes["pairs"] == [(2, 5), (1, 3), (4, 6)]
    assert same_set_up_to_sign(sp.ideal, expected_ideal_thm71(M, 2, 5))
    assert sp.complex.d3[5, 0] == M.reg.Z()


def test_specialization_commutes_with_construction():
    M = generic(4, 3)
    sp = specialize_thm71(M, 1, 2)
    gen = build_hb_dnn1(4)
    assert sp.complex.d2 == gen.d2.map(sp.substitution, M.reg)


def test_thm71_errors():
    M = generic(4, 3)
    with pytest.raises(SpecializationError):
        specialize_thm71(M, 2, 2)
    with pytest.raises(SpecializationError):
        specialize_thm71(M, 0, 2)
    with pytest.raises(SpecializationError):
        specialize_thm71(generic(5, 4), 1, 2)
    reg = VariableRegistry()
    Z, x = reg.free("Z", "x")
    with pytest.raises(SpecializationError):
        specialize_thm71(PolyMatrix(reg, [[Z, 0, 0], [0, x, 0], [0, 0, x], [x, x, x]]), 1, 2)


def test_thm71_custom_pairs():
    M = generic(4, 3)
    sp = specialize_thm71(M, 1, 2, pairs=[(1, 2), (3, 4)])
    assert compose_check(sp.complex) == (True, True)
    with pytest.raises(SpecializationError):
        specialize_thm71(M, 1, 2, pairs=[(1, 3), (2, 4)])


def test_pair_partition_is_adjacent():
    assert pair_partition(8, 3, 6) == [(3, 6), (1, 2), (4, 5), (7, 8)]


def test_minimality_false_for_proportional_rows():
    reg = VariableRegistry()
    x, y, z = reg.free("x", "y", "z")
    # rows 3, 4 proportional: every minor on rows {3, 4} vanishes
    M = PolyMatrix(reg, [[x, 0, 0], [0, y, 0], [x, y, z], [2 * x, 2 * y, 2 * z]])
    assert minimality_check_thm71(M, 1, 2) is False


def test_minimality_indeterminate_at_zero_budget():
    assert minimality_check_thm71(generic(4, 3), 1, 2, Budget(seconds=0)) is None


def test_thm72_generic():
    M = generic(4, 3)
    sp = specialize_thm72(M)
    Y = maximal_minors(M)
    Z1, Z2 = M.reg.Z(1), M.reg.Z(2)
    assert same_set_up_to_sign(sp.ideal, [Z1 * Z2 * Y[3], Z1 * Y[2], Z2 * Y[1], Y[0]])
    bottom = [[sp.complex.d3[r, c] for c in range(2)] for r in (3, 4)]
    assert bottom == [[Z1, 0], [0, -Z2]]
    assert minimality_check_thm72(M) is True
    assert same_set_up_to_sign(sp.ideal, expected_ideal_thm72(M))


def test_thm72_zero_matrix_still_composes():
    reg = VariableRegistry()
    sp = specialize_thm72(PolyMatrix.zeros(reg, 4, 3))
    assert compose_check(sp.complex) == (True, True)


def test_thm72_minimality_false_when_rows_vanish():
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    M = PolyMatrix(reg, [[x, y, 1], [0, 0, 0], [y, x, x], [0, 0, 0]])
    assert minimality_check_thm72(M) is False


def test_thm72_indeterminate_at_zero_budget():
    assert minimality_check_thm72(generic(4, 3), Budget(seconds=0)) is None


def test_thm72_shape_checked():
    with pytest.raises(SpecializationError):
        specialize_thm72(generic(4, 2))
