"""Polynomial matrices, determinants and pfaffians."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .poly import Polynomial, RegistryMismatch, VariableRegistry, sum_of_products


class PolyMatrix:
    """Dense rectangular grid of polynomials over one registry."""

    __slots__ = ("reg", "rows", "cols", "grid", "row_labels", "col_labels")

    def __init__(self, reg: VariableRegistry, grid: Sequence[Sequence[object]],
                 rows: int | None = None, cols: int | None = None,
                 row_labels: Sequence[str] | None = None,
                 col_labels: Sequence[str] | None = None):
        g = []
        for r in grid:
            row = []
            for x in r:
                if isinstance(x, Polynomial):
                    if x.reg is not reg:
                        raise RegistryMismatch("matrix entry over another registry")
                    row.append(x)
                else:
                    row.append(reg.const(x))
            g.append(tuple(row))
        self.reg = reg
        self.rows = len(g) if rows is None else rows
        self.cols = (len(g[0]) if g else 0) if cols is None else cols
        if len(g) != self.rows or any(len(r) != self.cols for r in g):
            raise ValueError("grid shape does not match declared dimensions")
        self.grid = tuple(g)
        self.row_labels = tuple(row_labels) if row_labels else None
        self.col_labels = tuple(col_labels) if col_labels else None

    @classmethod
    def zeros(cls, reg: VariableRegistry, rows: int, cols: int, **kw) -> "PolyMatrix":
        z = reg.zero()
        return cls(reg, [[z] * cols for _ in range(rows)], rows, cols, **kw)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.grid[i][j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.grid[i]

    def column(self, j: int) -> list[Polynomial]:
        return [r[j] for r in self.grid]

    def entries(self) -> Iterable[Polynomial]:
        for r in self.grid:
            yield from r

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.shape == other.shape
                and all(a == b for a, b in zip(self.entries(), other.entries())))

    def __hash__(self):
        return hash(self.grid)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries())

    def map(self, fn: Callable[[Polynomial], Polynomial], reg: VariableRegistry | None = None) -> "PolyMatrix":
        return PolyMatrix(self.reg if reg is None else reg, [[fn(x) for x in r] for r in self.grid],
                          self.rows, self.cols, self.row_labels, self.col_labels)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.reg is not other.reg:
            raise RegistryMismatch("matrix product over different registries")
        out = [[sum_of_products(self.reg, ((self.grid[i][k], other.grid[k][j]) for k in range(self.cols)))
                for j in range(other.cols)] for i in range(self.rows)]
        return PolyMatrix(self.reg, out, self.rows, other.cols, self.row_labels, other.col_labels)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.reg, [list(c) for c in zip(*self.grid)] if self.rows else [],
                          self.cols, self.rows, self.col_labels, self.row_labels)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.reg, [[self.grid[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def scale_rows(self, signs: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.reg, [[x * s for x in r] for r, s in zip(self.grid, signs)],
                          self.rows, self.cols, self.row_labels, self.col_labels)

    def scale_cols(self, signs: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.reg, [[x * s for x, s in zip(r, signs)] for r in self.grid],
                          self.rows, self.cols, self.row_labels, self.col_labels)

    def expand(self) -> "PolyMatrix":
        return self.map(lambda p: p.expand())

    def substitute(self, mapping, target: VariableRegistry | None = None) -> "PolyMatrix":
        return self.map(lambda p: p.substitute(mapping, target), self.reg if target is None else target)

    def evaluate(self, values) -> list[list[object]]:
        return [[x.evaluate(values) for x in r] for r in self.grid]

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.grid)


# ---------------------------------------------------------------- numeric

def bareiss_det(rows: Sequence[Sequence[object]]) -> object:
    """Fraction-free determinant of a square matrix of rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for s in range(k + 1, n):
                if a[s][k] != 0:
                    a[k], a[s] = a[s], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    d = sign * a[n - 1][n - 1]
    return d.numerator if d.denominator == 1 else d


def numeric_rank(rows: Sequence[Sequence[object]]) -> int:
    """Exact rank of a rational matrix by fraction-free elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    # clear denominators row by row so the elimination stays in the integers
    m = []
    for r in a:
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        m.append([int(x * den) for x in r])
    nr, nc = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, nr):
            f = m[i][col]
            m[i] = [(p * x - f * y) // prev for x, y in zip(m[i], m[rank])]
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------- symbolic

def cofactor_det(m: PolyMatrix) -> Polynomial:
    """Laplace expansion along rows, memoized on the surviving column subset."""
    n = m.rows
    if m.cols != n:
        raise ValueError("determinant of a non-square matrix")
    reg = m.reg
    memo: dict[tuple[int, ...], Polynomial] = {}

    def rec(r: int, cols: tuple[int, ...]) -> Polynomial:
        if r == n:
            return reg.one()
        got = memo.get(cols)
        if got is not None:
            return got
        pairs = []
        for pos, c in enumerate(cols):
            e = m.grid[r][c]
            if e.is_zero():
                continue
            sub = rec(r + 1, cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            pairs.append((e if pos % 2 == 0 else -e, sub))
        out = sum_of_products(reg, pairs)
        memo[cols] = out
        return out

    return rec(0, tuple(range(n)))


def determinant(m: PolyMatrix) -> Polynomial:
    """Exact determinant: Bareiss on constant matrices, memoized cofactor otherwise."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if all(x.is_constant() for x in m.entries()):
        return m.reg.const(bareiss_det([[x.constant() for x in r] for r in m.grid]))
    return cofactor_det(m)


def is_skew(m: PolyMatrix) -> bool:
    return m.rows == m.cols and all(
        m.grid[i][j] == -m.grid[j][i] for i in range(m.rows) for j in range(i, m.rows))


def pfaffian_indices(entry: Callable[[int, int], Polynomial], idx: Sequence[int],
                     reg: VariableRegistry, memo: dict | None = None) -> Polynomial:
    """Pfaffian of the skew matrix ``entry`` restricted to ``idx``.

    First-row expansion; sub-pfaffians are memoized by index tuple so repeated
    calls sharing ``memo`` reuse them.
    """
    memo = {} if memo is None else memo

    def rec(ix: tuple[int, ...]) -> Polynomial:
        if not ix:
            return reg.one()
        if len(ix) % 2:
            raise ValueError("pfaffian of odd size")
        got = memo.get(ix)
        if got is not None:
            return got
        i = ix[0]
        pairs = []
        for p in range(1, len(ix)):
            e = entry(i, ix[p])
            if e.is_zero():
                continue
            rest = rec(ix[1:p] + ix[p + 1:])
            pairs.append((e if p % 2 == 1 else -e, rest))
        out = sum_of_products(reg, pairs)
        memo[ix] = out
        return out

    return rec(tuple(idx))


def pfaffian(m: PolyMatrix) -> Polynomial:
    if m.rows != m.cols:
        raise ValueError("pfaffian of a non-square matrix")
    if m.rows % 2:
        raise ValueError("pfaffian of odd size")
    if not is_skew(m):
        raise ValueError("matrix is not skew-symmetric")
    return pfaffian_indices(lambda i, j: m.grid[i][j], range(m.rows), m.reg)


def _grid_minor(grid, rows: tuple[int, ...], cols: tuple[int, ...], reg: VariableRegistry, memo: dict) -> Polynomial:
    """det(grid[rows][cols]) by first-row expansion; ``memo`` is shared across calls on one grid."""
    if not rows:
        return reg.one()
    key = (rows, cols)
    got = memo.get(key)
    if got is not None:
        return got
    row = grid[rows[0]]
    pairs = []
    for pos, c in enumerate(cols):
        e = row[c]
        if e.is_zero():
            continue
        sub = _grid_minor(grid, rows[1:], cols[:pos] + cols[pos + 1:], reg, memo)
        if not sub.is_zero():
            pairs.append((e if pos % 2 == 0 else -e, sub))
    out = sum_of_products(reg, pairs)
    memo[key] = out
    return out


def atom_images(reg: VariableRegistry, mapping: dict, target: VariableRegistry) -> dict[int, Polynomial]:
    """Images of all atoms of ``reg`` under a ring map given on the plain variables.

    Atoms with a recipe are recomputed as minors or pfaffians of the mapped
    base grid, sharing sub-determinants; the rest go through their definitions.
    """
    out: dict[int, Polynomial] = {}
    grids: dict[str, list] = {}
    memos: dict[str, dict] = {}
    for i, v in enumerate(reg):
        if v.role != "atom" or i in mapping:
            continue
        recipe = reg.recipes.get(i)
        if recipe is None:
            out[i] = v.definition.substitute(mapping, target)
            continue
        base = recipe[1]
        if base not in grids:
            grids[base] = [[x.substitute(mapping, target) for x in r] for r in reg.bases[base]]
            memos[base] = {}
        if recipe[0] == "minor":
            _, _, rows, cols, sign = recipe
            p = _grid_minor(grids[base], rows, cols, target, memos[base])
        else:
            _, _, idx, sign = recipe
            g = grids[base]
            p = pfaffian_indices(lambda a, b: g[a][b], idx, target, memos[base])
        out[i] = p if sign == 1 else -p
    return out
