"""F^top for the format (1, 4, m+3, m), split and Hilbert–Burch variants.

Every entry of d1 and d2 is the coefficient of g_1∧…∧g_m in a wedge of the
one-forms G_ij, g_h with a divided power of C (see :mod:`resforge.exterior`).
The tables below list, per row and column, which wedges appear and with which
sign; even and odd m use different tables.
"""
from __future__ import annotations

from fractions import Fraction

from .complex import ChainComplex, FormatError, FormatSpec
from .determinantal import DefectB, GenericMatrix, SkewC
from .dnn1 import _finish, _labels
from .exterior import TopCalculus
from .matrix import PolyMatrix
from .poly import VariableRegistry, linear_combination, sum_of_products

# b^k_13 and b^k_24 change sign between the orientation in which the exterior
# formulas of the Hilbert–Burch variant are written and the orientation of the
# top three rows of d3.
HB_TWIST = {(1, 3): -1, (2, 4): -1}


def G(i: int, j: int) -> tuple:
    return ("G", i, j)


def g(h: int) -> tuple:
    return ("g", h)


def _rest(pool, *drop) -> list[int]:
    return [x for x in pool if x not in drop]


def _registry(m: int, hb: bool) -> VariableRegistry:
    reg = VariableRegistry()
    if hb:
        reg.declare_X(4, 3)
    reg.declare_b(4, m)
    reg.declare_c(m)
    return reg


def _check_m(m: int):
    if not isinstance(m, int) or m < 2:
        raise FormatError("format (1,4,m+3,m) is built for m >= 2")


# ------------------------------------------------------------------- split

# Signs of the wedge terms in d2, flattened over columns 1..3 in order; the
# columns h >= 4 always carry sign +1.
_SPLIT_SIGNS = {
    0: {1: [-1, -1, -1, 1], 2: [-1, 1, -1, 1], 3: [-1, 1, -1, -1], 4: [1, 1, -1, 1, 1, 1]},
    1: {1: [1, 1, 1, -1, 1], 2: [1, -1, 1, -1, -1], 3: [1, 1, -1, 1, 1], 4: [1, 1, 1]},
}


def _split_d2_terms(i: int, h: int, m: int) -> list[tuple[list, int]]:
    """Wedge terms (forms, divided power) of the split d2 entry (i, h)."""
    s, odd = m // 2, m % 2
    if i <= 3:
        j, k = _rest((1, 2, 3), i)
        if h == i:
            if odd:
                return [([G(i, 4), G(i, j), G(i, k)], s - 1)]
            return [([], s), ([G(i, 4), G(j, k)], s - 1)]
        if h <= 3:
            kk = _rest((1, 2, 3), i, h)[0]
            if odd:
                return [([G(h, 4), G(i, h), G(i, kk)], s - 1), ([G(i, h)], s)]
            return [([G(h, 4), G(h, kk)], s - 1)]
        if odd:
            return [([G(i, j), G(i, k), g(h - 3)], s - 1)]
        return [([G(j, k), g(h - 3)], s - 1)]
    if odd:
        return [([G(h, 4) if h <= 3 else g(h - 3)], s)]
    if h <= 3:
        a, bb = _rest((1, 2, 3), h)
        return [([G(a, h), G(h, bb)], s - 1), ([G(1, 2), G(1, 3), G(2, 3), G(h, 4)], s - 2)]
    return [([G(1, 2), G(1, 3), G(2, 3), g(h - 3)], s - 2)]


def _split_d1_terms(m: int) -> list[tuple[list, int]]:
    s = m // 2
    if m % 2:
        return [([G(2, 3)], s), ([G(1, 3)], s), ([G(1, 2)], s), ([G(1, 2), G(1, 3), G(2, 3)], s - 1)]
    return [([G(1, 2), G(1, 3)], s - 1), ([G(2, 1), G(2, 3)], s - 1),
            ([G(3, 1), G(3, 2)], s - 1), ([], s)]


def build_split_d4m(m: int, check: bool = True) -> ChainComplex:
    _check_m(m)
    fmt = FormatSpec("d4m", "split", m)
    reg = _registry(m, hb=False)
    B, C = DefectB(reg, m), SkewC(reg, m)
    T = TopCalculus(B, C)

    d1 = [T.top(f, r) * sg for (f, r), sg in zip(_split_d1_terms(m), (-1, -1, -1, 1))]
    d2 = []
    for i in range(1, 5):
        signs = iter(_SPLIT_SIGNS[m % 2][i])
        row = []
        for h in range(1, m + 4):
            terms = _split_d2_terms(i, h, m)
            coefs = [next(signs) for _ in terms] if h <= 3 else [1] * len(terms)
            row.append(linear_combination(reg, ((c, T.top(f, r)) for c, (f, r) in zip(coefs, terms))))
        d2.append(row)
    d3 = [[-B.entry(2, 3, u) for u in range(1, m + 1)],
          [B.entry(1, 3, u) for u in range(1, m + 1)],
          [-B.entry(1, 2, u) for u in range(1, m + 1)]]
    for t in range(1, m + 1):
        d3.append([B.L(u, t) + reg.c(t, u) for u in range(1, m + 1)])

    meta = {"sign-conventions": {
        "d1": "odd: -G23, -G13, -G12, G12^G13^G23; even: -G12^G13, -G21^G23, -G31^G32, C (top coefficients)",
        "d2": f"wedge-term signs {_SPLIT_SIGNS[m % 2]}, columns h>=4 all +1",
        "d3": "rows 1-3 (-b23, b13, -b12); row t+3, column u = L(u,t) + c_tu",
    }}
    return _finish(fmt,
                   PolyMatrix(reg, [d1], col_labels=_labels("e", 4)),
                   PolyMatrix(reg, d2, row_labels=_labels("e", 4), col_labels=_labels("f", m + 3)),
                   PolyMatrix(reg, d3, row_labels=_labels("f", m + 3), col_labels=_labels("g", m)),
                   meta, check)


# ---------------------------------------------------------- Hilbert–Burch

# Per row i: (sign of the X_ih term, shift K_i = Σ k·G_p∧G_q, X-terms (x, k, p, q),
# Y-terms (x, k, p), triple Y-term (k, p, q, r)).  Used by the even branch; the
# odd branch reuses the shifts K_i.
_HB_ROWS = {
    1: (1, [(1, (1, 2), (3, 4)), (-1, (1, 3), (2, 4)), (1, (1, 4), (2, 3))],
        [(2, -1, (2, 3), (2, 4)), (3, -1, (2, 3), (3, 4)), (4, -1, (2, 4), (3, 4))],
        [(2, 1, (3, 4)), (3, -1, (2, 4)), (4, 1, (2, 3))],
        (1, (2, 3), (2, 4), (3, 4))),
    2: (1, [(1, (1, 2), (3, 4)), (1, (1, 3), (2, 4)), (-1, (1, 4), (2, 3))],
        [(1, 1, (1, 3), (1, 4)), (3, 1, (1, 3), (3, 4)), (4, 1, (1, 4), (3, 4))],
        [(1, -1, (3, 4)), (3, 1, (1, 4)), (4, -1, (1, 3))],
        (1, (1, 3), (1, 4), (3, 4))),
    3: (-1, [(-1, (1, 2), (3, 4)), (-1, (1, 3), (2, 4)), (-1, (1, 4), (2, 3))],
        [(1, 1, (1, 2), (1, 4)), (2, 1, (1, 2), (2, 4)), (4, 1, (1, 4), (2, 4))],
        [(1, -1, (2, 4)), (2, 1, (1, 4)), (4, -1, (1, 2))],
        (-1, (1, 2), (1, 4), (2, 4))),
    4: (1, [(-1, (1, 2), (3, 4)), (1, (1, 3), (2, 4)), (1, (1, 4), (2, 3))],
        [(1, 1, (1, 2), (1, 3)), (2, 1, (1, 2), (2, 3)), (3, 1, (1, 3), (2, 3))],
        [(1, -1, (2, 3)), (2, 1, (1, 3)), (3, -1, (1, 2))],
        (1, (1, 2), (1, 3), (2, 3))),
}

_HB_EVEN_D1 = {1: (1, -1, 1, -1), 2: (1, 1, -1, 1), 3: (-1, 1, -1, 1), 4: (1, 1, -1, 1)}
_HB_ODD_D2 = {1: (-1, -1, -1, -1, 1, 1, -1, 1), 2: (-1, 1, 1, 1, -1, 1, -1, 1)}
_HB_ODD_D1 = {1: (1, 1, -1, 1), 2: (-1, 1, -1, 1)}


def _shift(i: int, eps: Fraction) -> list:
    return [(eps * k, G(*p), G(*q)) for k, p, q in _HB_ROWS[i][1]]


def _hb_even(reg, T, X, Y, m):
    s = m // 2
    half = Fraction(1, 2)
    d1, d2 = [], []
    for i in range(1, 5):
        rs, _, xterms, yterms, (ys, p3, q3, r3) = _HB_ROWS[i]
        up, down = _shift(i, half), _shift(i, -half)
        flip = rs  # makes the X_ih term of every row positive
        row = []
        for h in range(1, m + 4):
            if h <= 3:
                pairs = [(rs, X.entry(i, h) * T.top_shifted([], s, up))]
                pairs += [(k, X.entry(x, h) * T.top_shifted([G(*p), G(*q)], s - 1, up))
                          for x, k, p, q in xterms]
            else:
                gg = g(h - 3)
                pairs = [(k, Y[x] * T.top_shifted([gg, G(*p)], s - 1, up)) for x, k, p in yterms]
                pairs.append((ys, Y[i] * T.top_shifted([gg, G(*p3), G(*q3), G(*r3)], s - 2, up)))
            row.append(linear_combination(reg, pairs) * flip)
        d2.append(row)
        j, k, l = _rest((1, 2, 3, 4), i)
        terms = [Y[i] * T.top_shifted([], s, down),
                 Y[j] * T.top_shifted([G(i, k), G(i, l)], s - 1, down),
                 Y[k] * T.top_shifted([G(i, j), G(i, l)], s - 1, down),
                 Y[l] * T.top_shifted([G(i, j), G(i, k)], s - 1, down)]
        d1.append(linear_combination(reg, zip(_HB_EVEN_D1[i], terms)) * flip)
    return d1, d2


def _hb_odd(reg, T, X, Y, m):
    s = m // 2
    half = Fraction(1, 2)
    d1, d2 = [], []
    for i in range(1, 5):
        j, k, l = _rest((1, 2, 3, 4), i)
        down, up = _shift(i, -half), _shift(i, half)
        signs = _HB_ODD_D2[1 if i % 2 else 2]
        row = []
        for h in range(1, m + 4):
            if h <= 3:
                terms = [X.entry(i, h) * T.top_shifted([G(i, j), G(i, k), G(i, l)], s - 1, down),
                         X.entry(j, h) * T.top_shifted([G(i, j)], s, down),
                         X.entry(k, h) * T.top_shifted([G(i, k)], s, down),
                         X.entry(l, h) * T.top_shifted([G(i, l)], s, down)]
                coefs = signs[:4]
            else:
                gg = g(h - 3)
                terms = [Y[i] * T.top_shifted([gg], s, down),
                         Y[j] * T.top_shifted([gg, G(i, l), G(i, k)], s - 1, down),
                         Y[k] * T.top_shifted([gg, G(i, l), G(i, j)], s - 1, down),
                         Y[l] * T.top_shifted([gg, G(i, k), G(i, j)], s - 1, down)]
                coefs = signs[4:]
            # the global sign -1 makes the X_ih term positive
            row.append(-linear_combination(reg, zip(coefs, terms)))
        d2.append(row)
        terms = [Y[i] * T.top_shifted([G(j, k), G(j, l), G(k, l)], s - 1, up),
                 Y[j] * T.top_shifted([G(k, l)], s, up),
                 Y[k] * T.top_shifted([G(j, l)], s, up),
                 Y[l] * T.top_shifted([G(j, k)], s, up)]
        d1.append(-linear_combination(reg, zip(_HB_ODD_D1[1 if i % 2 else 2], terms)))
    return d1, d2


def build_hb_d4m(m: int, atoms: bool | None = None, check: bool = True,
                 convention: str = "derived") -> ChainComplex:
    """Hilbert–Burch variant over a generic 4×3 matrix X.

    m >= 4 is the documented range; m = 2, 3 use the same formulas and are
    marked as extrapolations in the metadata (they still must compose to zero).
    With ``atoms`` (default for m >= 4) the maximal minors Y_i stay as atoms.

    ``convention="printed"`` builds from the printed closed formulas instead,
    after searching their open sign choices; it raises
    :class:`resforge.printed.SignResolutionError` when the search is not conclusive.
    """
    if convention == "printed":
        from .printed import resolve_printed
        return resolve_printed(m)
    if convention != "derived":
        raise ValueError(f"unknown convention {convention!r}")
    atoms = m >= 4 if atoms is None else atoms
    _check_m(m)
    fmt = FormatSpec("d4m", "hb", m)
    reg = _registry(m, hb=True)
    X = GenericMatrix(reg, 4, 3, atoms=atoms)
    Y = {i: X.Y(i) for i in range(1, 5)}
    B, C = DefectB(reg, m, twist=HB_TWIST), SkewC(reg, m)
    T = TopCalculus(B, C)

    d1, d2 = (_hb_odd if m % 2 else _hb_even)(reg, T, X, Y, m)

    d3 = []
    for x in range(1, 4):
        row = []
        for u in range(1, m + 1):
            pairs = ((X.kept_rows((i, j), x) * (-1) ** (i + j + x), reg.b(i, j, u))
                     for i in range(1, 5) for j in range(i + 1, 5))
            row.append(sum_of_products(reg, pairs))
        d3.append(row)
    for u in range(1, m + 1):
        d3.append([B.P(u, t, "symmetric") + reg.c(u, t) for t in range(1, m + 1)])

    meta = {"sign-conventions": {
        "exterior-orientation": "b^k_13 and b^k_24 negated inside the wedge formulas",
        "shift": "row i uses C + K_i/2 in d2 and C - K_i/2 in d1 (even m), the reverse for odd m",
        "d3": "rows 1-3: sum_{i<j} (-1)^(i+j+x) X-minor(rows i,j; col x) b^u_ij; "
              "row u+3, column t: P_{u,t} (symmetric candidate) + c_ut",
        "P": "symmetric",
    }, "extrapolation": m < 4, "atoms": atoms}
    return _finish(fmt,
                   PolyMatrix(reg, [d1], col_labels=_labels("e", 4)),
                   PolyMatrix(reg, d2, row_labels=_labels("e", 4), col_labels=_labels("f", m + 3)),
                   PolyMatrix(reg, d3, row_labels=_labels("f", m + 3), col_labels=_labels("g", m)),
                   meta, check)
