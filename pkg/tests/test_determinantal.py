import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from resforge.determinantal import DefectB, GenericMatrix, SkewB, SkewC
from resforge.matrix import PolyMatrix, bareiss_det, cofactor_det, determinant, is_skew, numeric_rank, pfaffian
from resforge.poly import VariableRegistry


def leibniz_det(rows):
    """Permutation-sum oracle."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = -1 if inv % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def random_skew(rng, n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = rng.randint(-6, 6)
            a[j][i] = -a[i][j]
    return a


def test_pfaffian_squared_is_determinant_on_random_skew_matrices():
    rng = random.Random(4)
    reg = VariableRegistry()
    checked = 0
    for n in range(2, 9):
        for _ in range(10):
            a = random_skew(rng, n)
            m = PolyMatrix(reg, a)
            det = bareiss_det(a)
            if n % 2:
                assert det == 0
                with pytest.raises(ValueError):
                    pfaffian(m)
            else:
                assert pfaffian(m).constant() ** 2 == det
            checked += 1
    assert checked >= 50


def test_symbolic_pfaffian_4x4():
    reg = VariableRegistry()
    reg.declare_b(4)
    B = SkewB(reg, 4)
    b = reg.b
    assert B.P() == b(1, 2) * b(3, 4) - b(1, 3) * b(2, 4) + b(1, 4) * b(2, 3)
    m = PolyMatrix(reg, [[B.entry(i, j) for j in range(1, 5)] for i in range(1, 5)])
    assert is_skew(m)
    assert determinant(m) == B.P() ** 2


def test_sub_pfaffian_antisymmetry():
    reg = VariableRegistry()
    reg.declare_b(6)
    B = SkewB(reg, 6)
    assert B.P_hat(2, 5) == -B.P_hat(5, 2)
    assert B.pf_remove((2, 5)) == B.pf_keep((1, 3, 4, 6))


def test_bareiss_matches_leibniz():
    rng = random.Random(11)
    for n in range(1, 6):
        for _ in range(8):
            a = [[Fraction(rng.randint(-7, 7), rng.choice((1, 2))) for _ in range(n)] for _ in range(n)]
            assert bareiss_det(a) == leibniz_det(a)


def test_numeric_rank_frozen():
    assert numeric_rank([[1, 2, 3], [2, 4, 6], [0, 0, 1]]) == 2
    assert numeric_rank([[0, 0], [0, 0]]) == 0
    assert numeric_rank([[1, 0], [0, 1], [1, 1]]) == 2


def test_generic_signed_minors_annihilate_X():
    # Σ_i Y_i X_ij = 0 for every column (Hilbert–Burch)
    reg = VariableRegistry()
    reg.declare_X(4, 3)
    X = GenericMatrix(reg, 4, 3)
    for j in range(1, 4):
        assert sum((X.Y(i) * reg.X(i, j) for i in range(1, 5)), reg.zero()) == 0
    assert X.Y(1) == cofactor_det(PolyMatrix(reg, [[reg.X(i, j) for j in range(1, 4)] for i in (2, 3, 4)]))


def test_kept_rows_sign_follows_order():
    reg = VariableRegistry()
    reg.declare_X(4, 3)
    X = GenericMatrix(reg, 4, 3)
    assert X.kept_rows((3, 1), 2) == -X.kept_rows((1, 3), 2)
    assert X.complementary(1, 2, 3) == X.kept_rows((3, 4), 3)


def test_defect_b_and_skew_c_shapes():
    reg = VariableRegistry()
    reg.declare_b(4, 2)
    reg.declare_c(3)
    B = DefectB(reg, 2)
    C = SkewC(reg, 3)
    assert len(B.vector(1, 2)) == 2
    assert C.entry(2, 1) == -reg.c(1, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.lists(
    st.lists(st.integers(-5, 5), min_size=2 * k, max_size=2 * k), min_size=2 * k, max_size=2 * k)))
def test_pfaffian_property(raw):
    n = len(raw)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j], a[j][i] = raw[i][j], -raw[i][j]
    reg = VariableRegistry()
    assert pfaffian(PolyMatrix(reg, a)).constant() ** 2 == bareiss_det(a)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=4, max_size=4))
def test_cofactor_matches_bareiss(rows):
    reg = VariableRegistry()
    assert cofactor_det(PolyMatrix(reg, rows)) == bareiss_det(rows)
