# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse-polynomial kernels.

Polynomials are plain dicts mapping a packed monomial (a Python int holding one
byte per variable) to a nonzero rational coefficient (int or Fraction).
Multiplying monomials is integer addition of the packed keys, so the hot loops
below are dict probes plus big-int adds.
"""
from fractions import Fraction

cdef object _Fraction = Fraction


cdef inline object _norm(object v):
    if type(v) is _Fraction and (<object>v).denominator == 1:
        return (<object>v).numerator
    return v


cpdef dict normalize(dict a):
    """Drop zero coefficients and demote integral fractions to int."""
    cdef dict out = {}
    cdef object k, v
    for k, v in a.items():
        if v:
            out[k] = _norm(v)
    return out


cpdef dict add(dict a, dict b, object scale=1):
    """Return a + scale*b."""
    cdef dict out = dict(a)
    cdef object k, v, w
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


cpdef dict scale(dict a, object s):
    cdef dict out = {}
    cdef object k, v
    if not s:
        return out
    for k, v in a.items():
        out[k] = _norm(v * s)
    return out


cpdef void addmul(dict acc, dict a, dict b, object s=1):
    """In place: acc += s*a*b."""
    cdef object ka, va, kb, vb, k, w, c
    if len(a) > len(b):
        a, b = b, a
    for ka, va in a.items():
        if s != 1:
            va = va * s
        for kb, vb in b.items():
            k = ka + kb
            c = va * vb
            w = acc.get(k)
            if w is None:
                acc[k] = c
            else:
                w = w + c
                if w:
                    acc[k] = w
                else:
                    del acc[k]


cpdef dict mul(dict a, dict b):
    cdef dict out = {}
    addmul(out, a, b, 1)
    return normalize(out)


cpdef dict mul_monomial(dict a, object mono, object coeff):
    """Multiply by the single term coeff*mono."""
    cdef dict out = {}
    cdef object k, v
    for k, v in a.items():
        out[k + mono] = _norm(v * coeff)
    return out


cpdef object evaluate(dict a, list powers, int nvars):
    """Evaluate at a point.

    powers[i] is a list of the successive powers of the value of variable i,
    long enough for every exponent occurring in a.
    """
    cdef object total = 0
    cdef object k, v, term
    cdef bytes bs
    cdef Py_ssize_t i, e
    for k, v in a.items():
        term = v
        bs = (<object>k).to_bytes(nvars, "little")
        for i in range(nvars):
            e = bs[i]
            if e:
                term = term * powers[i][e]
        total = total + term
    return total
