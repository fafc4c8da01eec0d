"""F^top for the format (1, n, n, 1), split and Hilbert–Burch variants."""
from __future__ import annotations

from .complex import ChainComplex, FormatSpec, compose_check
from .determinantal import GenericMatrix, SkewB
from .matrix import PolyMatrix
from .poly import VariableRegistry, linear_combination, sum_of_products


class CompositionError(RuntimeError):
    """A builder produced matrices that do not compose to zero."""


def _labels(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def _finish(fmt: FormatSpec, d1, d2, d3, meta, check: bool) -> ChainComplex:
    cx = ChainComplex(fmt, d1, d2, d3, meta)
    if check:
        ok = compose_check(cx)
        if not all(ok):
            raise CompositionError(f"{fmt.label}: composition check failed {ok}")
        cx.meta["compose"] = list(ok)
    return cx


def build_split_dnn1(n: int, check: bool = True) -> ChainComplex:
    fmt = FormatSpec("dnn1", "split", n)
    reg = VariableRegistry()
    reg.declare_b(n)
    B = SkewB(reg, n)
    z = reg.zero()

    d1 = [B.P_hat(i, n) * (-1) ** (i + 1) for i in range(1, n)] + [z]
    d2 = [[reg.b(h, i) if h < n else (reg.one() if i == n else z) for h in range(1, n + 1)]
          for i in range(1, n + 1)]
    d3 = [[B.P_hat(i, n) * (-1) ** i] for i in range(1, n)] + [[B.P()]]

    meta = {"sign-conventions": {
        "d1": "(-1)^(i+1) P_hat(i,n), last entry 0",
        "d2": "entry(i,h) = b_hi for h<n; column n = (0,...,0,1)",
        "d3": "(-1)^i P_hat(i,n) for i<n, then P",
    }}
    return _finish(fmt,
                   PolyMatrix(reg, [d1], col_labels=_labels("e", n)),
                   PolyMatrix(reg, d2, row_labels=_labels("e", n), col_labels=_labels("f", n)),
                   PolyMatrix(reg, d3, row_labels=_labels("f", n), col_labels=["g"]),
                   meta, check)


def build_hb_dnn1(n: int, atoms: bool | None = None, check: bool = True) -> ChainComplex:
    """Hilbert–Burch variant over the generic n×(n−1) matrix X.

    With ``atoms`` (default for n ≥ 8) the maximal minors, complementary minors
    and sub-pfaffians stay as named atoms; ``ChainComplex.expanded`` expands them.
    """
    fmt = FormatSpec("dnn1", "hb", n)
    atoms = n >= 8 if atoms is None else atoms
    reg = VariableRegistry()
    reg.declare_X(n, n - 1)
    reg.declare_b(n)
    X = GenericMatrix(reg, n, n - 1, atoms=atoms)
    B = SkewB(reg, n, atoms=atoms)
    Y = {i: X.Y(i) for i in range(1, n + 1)}

    d1 = [sum_of_products(reg, ((Y[j] * (-1) ** (i + j), B.P_hat(i, j))
                                for j in range(1, n + 1) if j != i))
          for i in range(1, n + 1)]
    d2 = []
    for i in range(1, n + 1):
        row = [linear_combination(reg, ((-1, reg.X(j, h) * reg.b(j, i)) for j in range(1, n + 1) if j != i))
               for h in range(1, n)]
        d2.append(row + [Y[i]])
    d3 = []
    for k in range(1, n):
        v = sum_of_products(reg, ((X.complementary(i, j, k), B.P_hat(i, j))
                                  for i in range(1, n + 1) for j in range(i + 1, n + 1)))
        d3.append([v * (-1) ** k])
    d3.append([B.P()])

    meta = {"sign-conventions": {
        "d1": "u_i = sum_{j != i} (-1)^(i+j) Y_j P_hat(i,j), P_hat antisymmetric in (i,j)",
        "d2": "entry(i,h) = -sum_j X_jh b_ji for h<n; Y_i for h=n",
        "d3": "v_k = (-1)^k sum_{i<j} X-minor(rows i,j; col k) P_hat(i,j); "
              "the (-1)^(i+j) weighting fails d2*d3 = 0, the (-1)^k weighting passes",
    }, "atoms": atoms}
    return _finish(fmt,
                   PolyMatrix(reg, [d1], col_labels=_labels("e", n)),
                   PolyMatrix(reg, d2, row_labels=_labels("e", n), col_labels=_labels("f", n)),
                   PolyMatrix(reg, d3, row_labels=_labels("f", n), col_labels=["g"]),
                   meta, check)
