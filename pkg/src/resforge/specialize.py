"""Resolutions of explicit ideals by specializing the Hilbert–Burch complexes.

Given a Hilbert–Burch matrix M (n×(n−1), entries in a polynomial ring) the
generic matrix X is sent to M and the defect variables to 0, 1 or a new
indeterminate Z. Two recipes are implemented:

* format (1,n,n,1): b_kr ↦ Z, b ↦ 1 on the other pairs of a partition of
  {1..n} into pairs, all other b ↦ 0. The resolved ideal is
  (f_k, f_r) + Z·(f_i : i ≠ k, r).
* format (1,4,5,2): b¹_12 ↦ Z_1, b¹_34 ↦ 1, b²_13 ↦ Z_2, b²_24 ↦ 1, every
  other b and c_12 ↦ 0. The resolved ideal is (Z_1Z_2 f_4, Z_1 f_3, Z_2 f_2, f_1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex import ChainComplex, compose_check
from .d4m import build_hb_d4m
from .dnn1 import CompositionError, build_hb_dnn1
from .exactness import Budget, CERTIFIED, SKIPPED, grade_lower_bound
from .matrix import PolyMatrix, atom_images, cofactor_det
from .poly import Polynomial, VariableRegistry


class SpecializationError(ValueError):
    """Bad indices, a clash with an existing variable, or a malformed matrix."""


@dataclass
class Substitution:
    """Ring map from a complex's registry to a target registry."""
    source: VariableRegistry
    target: VariableRegistry
    mapping: dict[int, Polynomial]
    note: str = ""

    def __post_init__(self):
        for i, v in enumerate(self.source):
            if v.role != "atom" and i not in self.mapping:
                raise SpecializationError(f"substitution leaves {v.name} unmapped")
        for p in self.mapping.values():
            if p.reg is not self.target:
                raise SpecializationError("substitution image over the wrong registry")
        self.mapping.update(atom_images(self.source, self.mapping, self.target))

    def __call__(self, p: Polynomial) -> Polynomial:
        return p.substitute(self.mapping, self.target)

    def apply(self, c: ChainComplex, meta: dict | None = None) -> ChainComplex:
        meta = dict(c.meta) if meta is None else meta
        meta["substitution"] = self.note
        return c.map(self, self.target, meta)


@dataclass
class Specialization:
    complex: ChainComplex
    ideal: list[Polynomial]
    substitution: Substitution
    notes: dict = field(default_factory=dict)


# ---------------------------------------------------------------- helpers

def _check_matrix(M: PolyMatrix, rows: int, cols: int):
    if M.shape != (rows, cols):
        raise SpecializationError(f"expected a {rows}x{cols} matrix, got {M.rows}x{M.cols}")


def _fresh(reg: VariableRegistry, name: str, t: int | None, M: PolyMatrix) -> Polynomial:
    """The variable ``name`` of the target ring, declared if missing; it must not occur in M."""
    key = ("Z", t)
    if reg.has_key(key):
        z = reg.by_key(key)
    elif reg.has(name):
        z = reg.var(name)
    else:
        z = reg.declare_Z(t)
    idx = z.variables()[0]
    if any(idx in x.variables() for x in M.entries()):
        raise SpecializationError(f"{name} already occurs in the matrix")
    return z


def _x_mapping(src: VariableRegistry, M: PolyMatrix) -> dict[int, Polynomial]:
    out = {}
    for i, v in enumerate(src):
        if v.role == "X":
            _, a, b = v.key
            out[i] = M[a - 1, b - 1]
    return out


def maximal_minors(M: PolyMatrix) -> list[Polynomial]:
    """f_i = (−1)^{i+1} det(M with row i deleted), the Hilbert–Burch generators."""
    n = M.rows
    out = []
    for i in range(n):
        sub = M.submatrix([r for r in range(n) if r != i], range(M.cols))
        d = cofactor_det(sub)
        out.append(d if i % 2 == 0 else -d)
    return out


def submaximal_minors(M: PolyMatrix, rows_out: tuple[int, int]) -> list[Polynomial]:
    """M^{î,ĵ}_{k̂} for k = 1..cols: delete rows i, j (1-based) and column k."""
    rows = [r for r in range(M.rows) if r + 1 not in rows_out]
    out = []
    for k in range(M.cols):
        out.append(cofactor_det(M.submatrix(rows, [c for c in range(M.cols) if c != k])))
    return out


def pair_partition(n: int, k: int, r: int) -> list[tuple[int, int]]:
    """(k, r) followed by the remaining indices paired in increasing adjacent order."""
    rest = [i for i in range(1, n + 1) if i not in (k, r)]
    return [(k, r)] + [(rest[2 * h], rest[2 * h + 1]) for h in range(len(rest) // 2)]


def _perm_sign(seq: list[int]) -> int:
    s = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
    return s


# ---------------------------------------------------------------- (1,n,n,1)

def specialize_thm71(M: PolyMatrix, k: int, r: int, pairs: list[tuple[int, int]] | None = None,
                     check: bool = True) -> Specialization:
    """Resolve (f_k, f_r) + Z·(f_i : i ≠ k, r) for the Hilbert–Burch matrix M.

    ``pairs`` is the partition of {1..n} into pairs (first pair (k, r)); by
    default the remaining indices are paired adjacently. The pfaffian of the
    specialized skew matrix is ±Z with the sign of the pairing permutation;
    if it is −Z the basis vector g is negated so the last entry of d3 is Z.
    """
    n = M.rows
    if n < 4 or n % 2:
        raise SpecializationError("the matrix must be n×(n−1) with n even and n ≥ 4")
    _check_matrix(M, n, n - 1)
    if not (1 <= k < r <= n):
        raise SpecializationError("need 1 <= k < r <= n")
    pairs = pair_partition(n, k, r) if pairs is None else [tuple(sorted(p)) for p in pairs]
    if tuple(pairs[0]) != (k, r) or sorted(i for p in pairs for i in p) != list(range(1, n + 1)):
        raise SpecializationError("pairs must partition 1..n and start with (k, r)")
    T = M.reg
    Z = _fresh(T, "Z", None, M)

    gen = build_hb_dnn1(n, check=check)
    src = gen.reg
    mapping = _x_mapping(src, M)
    images = {pairs[0]: Z, **{p: T.one() for p in pairs[1:]}}
    for i, v in enumerate(src):
        if v.role == "b":
            _, a, b = v.key
            mapping[i] = images.get((a, b), T.zero())
    sub = Substitution(src, T, mapping, f"X -> M; b_{k}{r} -> Z; "
                       + ", ".join(f"b_{a}{b} -> 1" for a, b in pairs[1:]) + "; other b -> 0")
    cx = sub.apply(gen)
    sign = _perm_sign([i for p in pairs for i in p])
    # d1 entry i is ±f_{i'} (i' the partner of i), times Z off the pair (k, r)
    if sign < 0:
        cx = ChainComplex(cx.fmt, cx.d1, cx.d2, cx.d3.scale_cols([-1]), cx.meta)
    cx.meta["g-sign"] = sign
    cx.meta["pairs"] = [list(p) for p in pairs]
    if check and not all(compose_check(cx)):
        raise CompositionError("specialized complex does not compose")
    return Specialization(cx, list(cx.d1.row(0)), sub, {"pairs": pairs, "g-sign": sign})


def expected_ideal_thm71(M: PolyMatrix, k: int, r: int) -> list[Polynomial]:
    """(f_k, f_r) + Z·(f_i : i ≠ k, r) in index order (compare as a set)."""
    f = maximal_minors(M)
    Z = M.reg.by_key(("Z", None))
    return [f[i - 1] if i in (k, r) else Z * f[i - 1] for i in range(1, M.rows + 1)]


def minimality_check_thm71(M: PolyMatrix, k: int, r: int, budget: Budget | None = None,
                           seed: int = 0) -> bool | None:
    """True iff the submaximal minors M^{k̂,r̂}_{ĵ} generate an ideal of grade ≥ 2.

    None (indeterminate) when the grade computation is skipped or only probable.
    """
    n = M.rows
    _check_matrix(M, n, n - 1)
    if not (1 <= k < r <= n):
        raise SpecializationError("need 1 <= k < r <= n")
    return _grade_at_least(submaximal_minors(M, (k, r)), 2, budget, seed)


def _grade_at_least(gens: list[Polynomial], target: int, budget: Budget | None, seed: int) -> bool | None:
    budget = budget or Budget()
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    res = grade_lower_bound(gens, target, budget, seed)
    if res.tag == SKIPPED:
        return None
    if res.bound >= target:
        return True if res.tag == CERTIFIED else None
    return False if res.tag == CERTIFIED else None


# ---------------------------------------------------------------- (1,4,5,2)

def specialize_thm72(M: PolyMatrix, check: bool = True) -> Specialization:
    """Resolve (Z_1Z_2 f_4, Z_1 f_3, Z_2 f_2, f_1) for a 4×3 Hilbert–Burch matrix M.

    c_12 is sent to 0: the generators w_i contain Y_i·c_12, and only c_12 ↦ 0
    gives the stated ideal and the displayed third differential.
    """
    _check_matrix(M, 4, 3)
    T = M.reg
    Z1 = _fresh(T, "Z_1", 1, M)
    Z2 = _fresh(T, "Z_2", 2, M)

    gen = build_hb_d4m(2, check=check)
    src = gen.reg
    mapping = _x_mapping(src, M)
    images = {(1, 2, 1): Z1, (3, 4, 1): T.one(), (1, 3, 2): Z2, (2, 4, 2): T.one()}
    for i, v in enumerate(src):
        if v.role == "b":
            _, a, b, u = v.key
            mapping[i] = images.get((a, b, u), T.zero())
        elif v.role == "c":
            mapping[i] = T.zero()
    sub = Substitution(src, T, mapping,
                       "X -> M; b1_12 -> Z_1, b1_34 -> 1, b2_13 -> Z_2, b2_24 -> 1; other b -> 0; c_12 -> 0")
    cx = sub.apply(gen)
    if check and not all(compose_check(cx)):
        raise CompositionError("specialized complex does not compose")
    return Specialization(cx, list(cx.d1.row(0)), sub, {"c_12": 0})


def expected_ideal_thm72(M: PolyMatrix) -> list[Polynomial]:
    f = maximal_minors(M)
    Z1, Z2 = M.reg.by_key(("Z", 1)), M.reg.by_key(("Z", 2))
    return [Z1 * Z2 * f[3], Z1 * f[2], Z2 * f[1], f[0]]


def minimality_check_thm72(M: PolyMatrix, budget: Budget | None = None, seed: int = 0) -> bool | None:
    """Both minor families (rows {2,4} and rows {3,4}) nonzero and one of grade ≥ 2.

    None when a needed grade is skipped or only probable.
    """
    _check_matrix(M, 4, 3)
    fams = [_kept_row_minors(M, (2, 4)), _kept_row_minors(M, (3, 4))]
    if any(all(x.is_zero() for x in fam) for fam in fams):
        return False
    outcomes = [_grade_at_least(fam, 2, budget, seed) for fam in fams]
    if True in outcomes:
        return True
    if None in outcomes:
        return None
    return False


def _kept_row_minors(M: PolyMatrix, rows: tuple[int, int]) -> list[Polynomial]:
    """M^{i,j}_{k̂}: rows i, j kept, column k removed, k = 1..3."""
    r = [x - 1 for x in rows]
    return [cofactor_det(M.submatrix(r, [c for c in range(3) if c != k])) for k in range(3)]


def same_up_to_sign(a: list[Polynomial], b: list[Polynomial]) -> bool:
    """Equal as lists once each entry's sign is ignored (order-sensitive)."""
    return len(a) == len(b) and all(x == y or x == -y for x, y in zip(a, b))


def same_set_up_to_sign(a: list[Polynomial], b: list[Polynomial]) -> bool:
    """Equal as multisets of polynomials up to sign (order-insensitive)."""
    rest = list(b)
    for x in a:
        for i, y in enumerate(rest):
            if x == y or x == -y:
                del rest[i]
                break
        else:
            return False
    return not rest
