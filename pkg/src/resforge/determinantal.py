"""Named generators: signed minors of X, sub-pfaffians of the b-matrix,
B-minors, the mixed pfaffians P_{u,t} and L_{s,t}, and Γ-pfaffians of c.

Every handle caches what it computes, keyed by index sets; the builders hit
the same sub-pfaffians and minors many times.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .matrix import PolyMatrix, cofactor_det, pfaffian_indices
from .poly import Polynomial, VariableRegistry

# Canonical order of the six pairs in {1,2,3,4}; fixes the columns of the m×6 matrix B.
PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

# The two trailing factors of the printed P_{u,t} are in doubt; each candidate
# names the t-side factor of the fifth and sixth terms.
P_CANDIDATES = {
    "printed": ((1, 4), (1, 4)),
    "symmetric": ((1, 3), (1, 4)),
    "swap-last": ((1, 4), (1, 3)),
    "both-13": ((1, 3), (1, 3)),
}


def _tag(ix: Iterable[int]) -> str:
    return "_".join(str(i) for i in ix) or "none"


class GenericMatrix:
    """The generic matrix X with entries X(i,j), 1-based."""

    def __init__(self, reg: VariableRegistry, rows: int, cols: int, atoms: bool = False):
        self.reg, self.rows, self.cols, self.atoms = reg, rows, cols, atoms
        self._minor: dict = {}

    def entry(self, i: int, j: int) -> Polynomial:
        return self.reg.X(i, j)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        key = (tuple(rows), tuple(cols))
        got = self._minor.get(key)
        if got is None:
            m = PolyMatrix(self.reg, [[self.entry(i, j) for j in cols] for i in rows])
            got = cofactor_det(m)
            self._minor[key] = got
        return got

    def _maybe_atom(self, name: str, p: Polynomial, rows, cols, sign: int) -> Polynomial:
        if not (self.atoms and len(p) > 1):
            return p
        if "X" not in self.reg.bases:
            self.reg.bases["X"] = [[self.entry(i, j) for j in range(1, self.cols + 1)]
                                   for i in range(1, self.rows + 1)]
        recipe = ("minor", "X", tuple(r - 1 for r in rows), tuple(c - 1 for c in cols), sign)
        return self.reg.atom(name, p, recipe)

    def Y(self, i: int) -> Polynomial:
        """Signed maximal minor: (−1)^{i+1} det(X with row i deleted)."""
        if self.cols != self.rows - 1:
            raise ValueError("signed maximal minors need an n×(n−1) matrix")
        if not 1 <= i <= self.rows:
            raise IndexError(f"row {i} out of range")
        rows = [r for r in range(1, self.rows + 1) if r != i]
        d = self.minor(rows, range(1, self.cols + 1))
        return self._maybe_atom(f"Y_{i}", d if i % 2 else -d, rows, range(1, self.cols + 1), 1 if i % 2 else -1)

    def complementary(self, i: int, j: int, k: int) -> Polynomial:
        """Minor deleting rows i, j and column k."""
        if not (1 <= i < j <= self.rows and 1 <= k <= self.cols):
            raise IndexError("bad indices for a complementary minor")
        rows = [r for r in range(1, self.rows + 1) if r not in (i, j)]
        cols = [c for c in range(1, self.cols + 1) if c != k]
        return self._maybe_atom(f"M_{i}_{j}_{k}", self.minor(rows, cols), rows, cols, 1)

    def kept_rows(self, rows: Sequence[int], k: int) -> Polynomial:
        """Minor keeping only ``rows`` and deleting column k."""
        cols = [c for c in range(1, self.cols + 1) if c != k]
        if len(rows) != len(cols):
            raise ValueError("kept rows must make a square minor")
        return self.minor(sorted(rows), cols) * _perm_sign(rows)


class SkewB:
    """The n×n skew matrix on b_{ij}, with memoized sub-pfaffians."""

    def __init__(self, reg: VariableRegistry, n: int, atoms: bool = False):
        self.reg, self.n, self.atoms = reg, n, atoms
        self._memo: dict = {}

    def entry(self, i: int, j: int) -> Polynomial:
        return self.reg.b(i, j)

    def pf_keep(self, keep: Iterable[int]) -> Polynomial:
        ix = tuple(sorted(keep))
        if len(ix) % 2:
            raise ValueError("sub-pfaffian of odd size")
        p = pfaffian_indices(self.entry, ix, self.reg, self._memo)
        if self.atoms and len(p) > 1:
            if "B" not in self.reg.bases:
                self.reg.bases["B"] = [[self.entry(i, j) for j in range(1, self.n + 1)]
                                       for i in range(1, self.n + 1)]
            return self.reg.atom("Pf_" + _tag(ix), p, ("pf", "B", tuple(i - 1 for i in ix), 1))
        return p

    def pf_remove(self, removed: Iterable[int]) -> Polynomial:
        rem = set(removed)
        return self.pf_keep(i for i in range(1, self.n + 1) if i not in rem)

    def P(self) -> Polynomial:
        return self.pf_keep(range(1, self.n + 1))

    def P_hat(self, i: int, j: int) -> Polynomial:
        """P_{î,ĵ}; antisymmetric in (i, j) so that both orders are usable."""
        if i == j:
            return self.reg.zero()
        p = self.pf_remove((i, j))
        return p if i < j else -p


class DefectB:
    """The m×6 matrix of b^k_{ij}.

    ``twist`` multiplies the variable b^k_{ij} by a fixed sign per pair; the
    Hilbert–Burch d4m builder uses it to move between the orientation in which
    its exterior formulas are derived and the printed orientation of d3.
    """

    def __init__(self, reg: VariableRegistry, m: int, twist: dict | None = None):
        self.reg, self.m = reg, m
        self.twist = twist or {}
        self._minor: dict = {}

    def entry(self, i: int, j: int, k: int) -> Polynomial:
        if i == j:
            return self.reg.zero()
        lo, hi = min(i, j), max(i, j)
        p = self.reg.b(lo, hi, k) * self.twist.get((lo, hi), 1)
        return p if i < j else -p

    def vector(self, i: int, j: int) -> list[Polynomial]:
        """Coordinates of G_{ij} = Σ_k b^k_{ij} g_k."""
        return [self.entry(i, j, k) for k in range(1, self.m + 1)]

    def minor(self, row_pairs: Sequence[tuple[int, int]], cols: Sequence[int]) -> Polynomial:
        """B^{cols}_{pairs}: determinant with (a, b) entry b^{cols[b]}_{pairs[a]}."""
        if len(row_pairs) != len(cols):
            raise ValueError("B-minor needs as many pairs as columns")
        canon = [tuple(sorted(p)) for p in row_pairs]
        if len(set(canon)) != len(canon) or len(set(cols)) != len(cols):
            raise ValueError("duplicate pairs or columns in a B-minor")
        key = (tuple(tuple(p) for p in row_pairs), tuple(cols))
        got = self._minor.get(key)
        if got is None:
            m = PolyMatrix(self.reg, [[self.entry(p[0], p[1], k) for k in cols] for p in row_pairs])
            got = cofactor_det(m)
            self._minor[key] = got
        return got

    def L(self, s: int, t: int) -> Polynomial:
        e = self.entry
        return e(1, 2, s) * e(3, 4, t) - e(1, 3, s) * e(2, 4, t) + e(2, 3, s) * e(1, 4, t)

    def P(self, u: int, t: int, candidate: str = "symmetric") -> Polynomial:
        fifth, sixth = P_CANDIDATES[candidate]
        e = self.entry
        s = (e(1, 2, u) * e(3, 4, t) - e(1, 3, u) * e(2, 4, t) + e(1, 4, u) * e(2, 3, t)
             + e(3, 4, u) * e(1, 2, t) - e(2, 4, u) * e(*fifth, t) + e(2, 3, u) * e(*sixth, t))
        return s * Fraction(1, 2)


class SkewC:
    """The m×m skew matrix on c_{ut} and its Γ-pfaffians."""

    def __init__(self, reg: VariableRegistry, m: int):
        self.reg, self.m = reg, m
        self._memo: dict = {}

    def entry(self, u: int, t: int) -> Polynomial:
        return self.reg.c(u, t)

    def keep(self, kept: Iterable[int]) -> Polynomial:
        ix = tuple(sorted(kept))
        if len(ix) % 2:
            raise ValueError("Γ of odd size")
        return pfaffian_indices(self.entry, ix, self.reg, self._memo)

    def remove(self, removed: Iterable[int]) -> Polynomial:
        rem = set(removed)
        return self.keep(u for u in range(1, self.m + 1) if u not in rem)


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
            elif seq[a] == seq[b]:
                return 0
    return s


# ---- functional interface ----

def signed_maximal_minor(X: GenericMatrix, i: int) -> Polynomial:
    return X.Y(i)


def complementary_minor(X: GenericMatrix, i: int, j: int, k: int) -> Polynomial:
    return X.complementary(i, j, k)


def sub_pfaffian(B: SkewB, index_set: Iterable[int], mode: str = "remove") -> Polynomial:
    if mode == "keep":
        return B.pf_keep(index_set)
    if mode == "remove":
        return B.pf_remove(index_set)
    raise ValueError("mode must be 'keep' or 'remove'")


def b_minor(B: DefectB, row_pairs: Sequence[tuple[int, int]], cols: Sequence[int]) -> Polynomial:
    return B.minor(row_pairs, cols)


def mixed_pfaffian_P(B: DefectB, u: int, t: int, candidate: str = "symmetric") -> Polynomial:
    return B.P(u, t, candidate)


def mixed_pfaffian_L(B: DefectB, s: int, t: int) -> Polynomial:
    return B.L(s, t)


def gamma_pfaffian(C: SkewC, removed: Iterable[int] = ()) -> Polynomial:
    return C.remove(removed)


def subsets(m: int, k: int):
    return combinations(range(1, m + 1), k)
