"""Format-(1, r1, r2, r3) chain complexes and the exact composition check."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any

from .matrix import PolyMatrix
from .poly import BITS, Polynomial, VariableRegistry


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class FormatSpec:
    family: str   # "dnn1" or "d4m"
    variant: str  # "split" or "hb"
    param: int    # n for dnn1, m for d4m

    def __post_init__(self):
        if self.family not in ("dnn1", "d4m"):
            raise FormatError(f"unknown family {self.family!r}")
        if self.variant not in ("split", "hb"):
            raise FormatError(f"unknown variant {self.variant!r}")
        if not isinstance(self.param, int):
            raise FormatError("parameter must be an integer")
        if self.family == "dnn1" and (self.param < 4 or self.param % 2):
            raise FormatError("format (1,n,n,1) needs n even and n >= 4")
        if self.family == "d4m" and self.param < 1:
            raise FormatError("format (1,4,m+3,m) needs m >= 1")

    @property
    def ranks(self) -> tuple[int, int, int, int]:
        if self.family == "dnn1":
            return (1, self.param, self.param, 1)
        return (1, 4, self.param + 3, self.param)

    @property
    def label(self) -> str:
        return f"{self.family}({self.param}) {self.variant}"


def expected_ranks(f: FormatSpec) -> tuple[int, int, int]:
    """Ranks of (d1, d2, d3) forced by exactness: (1, r1 − 1, r3)."""
    _, r1, r2, r3 = f.ranks
    if r1 - 1 != r2 - r3:
        raise FormatError("format violates rank additivity")
    return (1, r1 - 1, r3)


@dataclass
class ChainComplex:
    fmt: FormatSpec
    d1: PolyMatrix
    d2: PolyMatrix
    d3: PolyMatrix
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        _, r1, r2, r3 = self.fmt.ranks
        if self.d1.shape != (1, r1) or self.d2.shape != (r1, r2) or self.d3.shape != (r2, r3):
            raise FormatError(
                f"shapes {self.d1.shape}, {self.d2.shape}, {self.d3.shape} do not fit format {self.fmt.ranks}")
        if not (self.d1.reg is self.d2.reg is self.d3.reg):
            raise FormatError("differentials over different registries")

    @property
    def reg(self) -> VariableRegistry:
        return self.d1.reg

    @property
    def differentials(self) -> tuple[PolyMatrix, PolyMatrix, PolyMatrix]:
        return self.d1, self.d2, self.d3

    def has_atoms(self) -> bool:
        return any(v.role == "atom" for v in self.reg)

    def expanded(self) -> "ChainComplex":
        if not self.has_atoms():
            return self
        return ChainComplex(self.fmt, self.d1.expand(), self.d2.expand(), self.d3.expand(), dict(self.meta))

    def map(self, fn, reg: VariableRegistry | None = None, meta: dict | None = None) -> "ChainComplex":
        return ChainComplex(self.fmt, self.d1.map(fn, reg), self.d2.map(fn, reg), self.d3.map(fn, reg),
                            dict(self.meta) if meta is None else meta)

    def same_matrices(self, other: "ChainComplex") -> bool:
        a, b = self.expanded(), other.expanded()
        return all(x == y for x, y in zip(a.differentials, b.differentials))


# ---------------------------------------------------------------- zero test

def _side_masks(reg: VariableRegistry) -> tuple[int, int]:
    """Bit masks of the X-side and the b-side variables (atoms included).

    An atom belongs to the side of the variables in its definition; the two
    sides never share a variable, so grouping by one side and expanding the
    atoms of the other is an exact rewriting.
    """
    xmask = bmask = 0
    for idx, v in enumerate(reg):
        bits = ((1 << BITS) - 1) << (BITS * idx)
        if v.role == "atom":
            roles = {reg.variable(i).role for i in v.definition.variables()}
            side_x = roles <= {"X"}
        else:
            side_x = v.role == "X"
        if side_x:
            xmask |= bits
        else:
            bmask |= bits
    return xmask, bmask


def _group(p: Polynomial, inner: int) -> dict[int, dict]:
    groups: dict[int, dict] = {}
    for mono, c in p.raw.items():
        groups.setdefault(mono & ~inner, {})[mono & inner] = c
    return groups


def _expand_grouped(p: Polynomial, inner: int) -> bool:
    """True if p is proved zero by expanding the atoms of the ``inner`` side first."""
    reg = p.reg
    blocks: dict[frozenset, list] = {}
    for outer, terms in _group(p, inner).items():
        q = Polynomial(reg, terms).expand()
        if q.is_zero():
            continue
        lead_mono = max(q.raw)
        lead = q.raw[lead_mono]
        norm = frozenset((k, v / lead) for k, v in q.raw.items())
        blocks.setdefault(norm, []).append((outer, lead))
    for outer_terms in blocks.values():
        t: dict = {}
        for outer, lead in outer_terms:
            t[outer] = t.get(outer, 0) + lead
        if not Polynomial(reg, t, normalized=False).expand().is_zero():
            return False
    return True


def is_identically_zero(p: Polynomial) -> bool:
    """Exact zero test for polynomials that may contain atoms."""
    if p.is_zero():
        return True
    if not p.atoms():
        return False
    xmask, bmask = _side_masks(p.reg)
    for inner in (bmask, xmask):
        if _expand_grouped(p, inner):
            return True
    return p.expand().is_zero()


def _denominator_lcm(polys) -> int:
    d = 1
    for p in polys:
        for c in p.raw.values():
            if isinstance(c, Fraction):
                d = d * c.denominator // gcd(d, c.denominator)
    return d


def product_is_zero(a: PolyMatrix, b: PolyMatrix) -> bool:
    # Scaling rows of a and columns of b by nonzero constants does not change
    # which entries of a·b vanish; integer coefficients multiply much faster.
    a = a.scale_rows([_denominator_lcm(a.row(i)) for i in range(a.rows)])
    b = b.scale_cols([_denominator_lcm(b.column(j)) for j in range(b.cols)])
    prod = a @ b
    return all(is_identically_zero(x) for x in prod.entries())


def compose_check(c: ChainComplex) -> tuple[bool, bool]:
    """(d1·d2 == 0, d2·d3 == 0) as exact polynomial identities."""
    if c.d1.cols != c.d2.rows or c.d2.cols != c.d3.rows:
        raise FormatError("shape mismatch")
    return product_is_zero(c.d1, c.d2), product_is_zero(c.d2, c.d3)
