"""Top-degree coefficients in the exterior algebra on g_1, …, g_m.

The d4m differentials are coefficients of g_1∧…∧g_m in products of 1-forms
(G_{ij} = Σ_k b^k_{ij} g_k and the basis vectors g_h) with divided powers of
C = Σ_{u<t} c_{ut} g_u∧g_t. With k one-forms and C^{(r)}, k + 2r = m, the
coefficient is

    Σ_{|U|=k} det(forms restricted to U) · shuffle(U) · Γ(complement of U),

which is the B-minor times Γ_{û,…} sum that the closed formulas are written in.
A row-dependent shift C ↦ C + ε·K, with K a combination of G_p∧G_q, expands
by the divided-power rule because each G_p∧G_q squares to zero.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .determinantal import DefectB, SkewC
from .matrix import PolyMatrix, cofactor_det
from .poly import Polynomial, linear_combination

# A form is ("G", i, j) for G_{ij} (either orientation) or ("g", h).
Form = tuple


def _canon(forms: Sequence[Form]) -> tuple[int, tuple[Form, ...]]:
    """Orient every G_{ij} with i<j and sort; return (sign, forms) or (0, ())."""
    sign, out = 1, []
    for f in forms:
        if f[0] == "G":
            i, j = f[1], f[2]
            if i == j:
                return 0, ()
            if i > j:
                sign, f = -sign, ("G", j, i)
        out.append(f)
    # bubble sort keeps track of the permutation sign
    for a in range(len(out)):
        for b in range(len(out) - 1 - a):
            if out[b] > out[b + 1]:
                out[b], out[b + 1] = out[b + 1], out[b]
                sign = -sign
            elif out[b] == out[b + 1]:
                return 0, ()
    for b in range(len(out) - 1):
        if out[b] == out[b + 1]:
            return 0, ()
    return sign, tuple(out)


class TopCalculus:
    def __init__(self, B: DefectB, C: SkewC):
        self.B, self.C, self.m = B, C, B.m
        self.reg = B.reg
        self._memo: dict = {}

    def _row(self, f: Form, cols: Sequence[int]) -> list[Polynomial]:
        if f[0] == "G":
            return [self.B.entry(f[1], f[2], k) for k in cols]
        return [self.reg.one() if k == f[1] else self.reg.zero() for k in cols]

    def top(self, forms: Sequence[Form], r: int) -> Polynomial:
        """Coefficient of g_1∧…∧g_m in forms[0]∧…∧forms[-1]∧C^{(r)}."""
        k = len(forms)
        if r < 0 or k + 2 * r != self.m:
            return self.reg.zero()
        sign, canon = _canon(forms)
        if not sign:
            return self.reg.zero()
        key = (canon, r)
        got = self._memo.get(key)
        if got is None:
            pairs = []
            for U in combinations(range(1, self.m + 1), k):
                gamma = self.C.remove(U)
                if gamma.is_zero():
                    continue
                d = cofactor_det(PolyMatrix(self.reg, [self._row(f, U) for f in canon])) if k else self.reg.one()
                if d.is_zero():
                    continue
                shuffle = -1 if (sum(U) - k * (k + 1) // 2) % 2 else 1
                pairs.append((shuffle, d * gamma))
            got = linear_combination(self.reg, pairs)
            self._memo[key] = got
        return got if sign > 0 else -got

    def top_shifted(self, forms: Sequence[Form], q: int,
                    shift: Sequence[tuple[object, Form, Form]]) -> Polynomial:
        """Coefficient of the top form in forms ∧ (C + Σ κ·A∧B)^{(q)}."""
        pairs = []
        for size in range(0, min(q, len(shift)) + 1):
            for S in combinations(shift, size):
                coef = 1
                extra: list[Form] = []
                for kappa, a, b in S:
                    coef = coef * kappa
                    extra += [a, b]
                if coef:
                    pairs.append((coef, self.top(list(forms) + extra, q - size)))
        return linear_combination(self.reg, pairs)
