"""Pure-Python twin of the compiled kernels in ``_kernel.pyx``.

Same dict-of-packed-monomials representation and identical results; used when
the extension is not built or when RESFORGE_BACKEND=python is set.
"""
from fractions import Fraction


def _norm(v):
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def normalize(a):
    return {k: _norm(v) for k, v in a.items() if v}


def add(a, b, scale=1):
    out = dict(a)
    if not scale:
        return out
    for k, v in b.items():
        if scale != 1:
            v = v * scale
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w:
                out[k] = _norm(w)
            else:
                del out[k]
    return out


def scale(a, s):
    if not s:
        return {}
    return {k: _norm(v * s) for k, v in a.items()}


def addmul(acc, a, b, s=1):
    if len(a) > len(b):
        a, b = b, a
    get = acc.get
    for ka, va in a.items():
        if s != 1:
            va = va * s
        for kb, vb in b.items():
            k = ka + kb
            w = get(k)
            if w is None:
                acc[k] = va * vb
            else:
                w = w + va * vb
                if w:
                    acc[k] = w
                else:
                    del acc[k]


def mul(a, b):
    out = {}
    addmul(out, a, b, 1)
    return normalize(out)


def mul_monomial(a, mono, coeff):
    return {k + mono: _norm(v * coeff) for k, v in a.items()}


def evaluate(a, powers, nvars):
    total = 0
    for k, v in a.items():
        term = v
        for i, e in enumerate(k.to_bytes(nvars, "little")):
            if e:
                term = term * powers[i][e]
        total = total + term
    return total
