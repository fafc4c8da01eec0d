"""Buchberger's algorithm on packed monomials, normal forms, and codimension.

Polynomials are handled as raw ``{packed monomial: coefficient}`` dicts while
the basis is being built; the public entry points take and return
:class:`~resforge.poly.Polynomial`. Divisibility of packed monomials uses
the borrow trick: with every exponent below 128, ``a | b`` exactly when
``b − a`` is nonnegative and has no byte with its high bit set.
"""
from __future__ import annotations

import heapq
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernel
from .poly import BITS, Polynomial, VariableRegistry, order_key

_HALF = 1 << (BITS - 1)


class ResourceCapExceeded(RuntimeError):
    """Buchberger stopped at a configured cap; no basis was produced."""

    def __init__(self, what: str, stats: dict):
        super().__init__(f"groebner cap exceeded: {what}")
        self.what = what
        self.stats = stats


def budget_seconds() -> float:
    ms = os.environ.get("RESFORGE_BUDGET_MS")
    if ms:
        try:
            return max(0.0, int(ms) / 1000.0)
        except ValueError:
            pass
    return 30.0


@dataclass(frozen=True)
class Caps:
    max_pairs: int = 20000
    max_degree: int = 40
    max_basis: int = 2000
    seconds: float | None = None  # None: RESFORGE_BUDGET_MS or 30 s

    def deadline(self) -> float:
        s = budget_seconds() if self.seconds is None else self.seconds
        return time.monotonic() + s


@dataclass
class GroebnerBasis:
    gens: list[Polynomial]
    order: str
    reduced: bool = True
    stats: dict = field(default_factory=dict)

    @property
    def reg(self) -> VariableRegistry:
        return self.gens[0].reg if self.gens else None

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.gens)

    def leading_monomials(self) -> list[int]:
        key = order_key(self.order, len(self.reg)) if self.gens else None
        return [max(g.raw, key=key) for g in self.gens if not g.is_zero()]


# ---------------------------------------------------------------- monomials

_COMPLEMENT = bytes(255 - e for e in range(256))


def _int_key(order: str, n: int):
    """Integer sort key agreeing with :func:`resforge.poly.order_key`."""
    order_key(order, n)  # validates the name
    shift = 8 * n
    if order == "degrevlex":
        def key(m):
            bs = m.to_bytes(n, "little")
            return (sum(bs) << shift) | int.from_bytes(bs[::-1].translate(_COMPLEMENT), "big")
    elif order == "lex":
        def key(m):
            return int.from_bytes(m.to_bytes(n, "little"), "big")
    else:
        def key(m):
            bs = m.to_bytes(n, "little")
            return (sum(bs) << shift) | int.from_bytes(bs, "big")
    return key


class _Mono:
    def __init__(self, nvars: int, order: str):
        self.n = nvars
        self._key = _int_key(order, nvars)
        self._cache: dict[int, int] = {}
        self.high = int.from_bytes(bytes([_HALF]) * nvars, "little") if nvars else 0

    def key(self, a: int) -> int:
        k = self._cache.get(a)
        if k is None:
            k = self._cache[a] = self._key(a)
        return k

    def divides(self, a: int, b: int) -> bool:
        d = b - a
        return d >= 0 and not (d & self.high)

    def lcm(self, a: int, b: int) -> int:
        ab, bb = a.to_bytes(self.n, "little"), b.to_bytes(self.n, "little")
        return int.from_bytes(bytes(max(x, y) for x, y in zip(ab, bb)), "little")

    def deg(self, a: int) -> int:
        return sum(a.to_bytes(self.n, "little"))

    def coprime(self, a: int, b: int) -> bool:
        ab, bb = a.to_bytes(self.n, "little"), b.to_bytes(self.n, "little")
        return not any(x and y for x, y in zip(ab, bb))

    def lead(self, p: dict) -> int:
        return max(p, key=self.key)


# Inside the engine polynomials have integer coefficients; they are kept
# primitive with a positive leading coefficient and reduced fraction-free.

def _integral(p: dict) -> dict:
    den = 1
    for c in p.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return {k: int(c * den) for k, c in p.items()} if den != 1 else {k: int(c) for k, c in p.items()}


def _monic_mod(p: dict, lm: int, mod: int) -> dict:
    inv = pow(p[lm], -1, mod)
    return {k: c * inv % mod for k, c in p.items()}


def _to_mod(p: dict, mod: int) -> dict:
    out = {}
    for k, c in p.items():
        v = c.numerator * pow(c.denominator, -1, mod) % mod if isinstance(c, Fraction) else c % mod
        if v:
            out[k] = v
    return out


def _primitive(p: dict, lm: int) -> dict:
    g = 0
    for c in p.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    if p[lm] < 0:
        g = -g
    return p if g == 1 else {k: c // g for k, c in p.items()}


class _Clock:
    def __init__(self, deadline: float | None):
        self.deadline = deadline
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and not self.ticks & 255 and time.monotonic() > self.deadline:
            raise _Timeout


class _Timeout(Exception):
    pass


def _reduce(p: dict, basis: list[tuple[int, dict]], M: _Mono, full: bool,
            clock: _Clock | None = None, mod: int = 0) -> tuple[dict, int]:
    """Fraction-free reduction of an integer polynomial.

    Returns (r, s) with s·p ≡ r modulo the basis and s a positive integer.
    Only the leading term is reduced unless ``full``. With ``mod`` the
    coefficients live in Z/mod, the basis is monic and s is always 1.
    """
    p = dict(p)
    heap = [(-M.key(m), m) for m in p]
    heapq.heapify(heap)
    rem: dict = {}
    scale = 1
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        if clock is not None:
            clock.tick()
        for glm, g in basis:
            if M.divides(glm, m):
                if mod:
                    a, b = 1, c
                else:
                    lc = g[glm]
                    d = math.gcd(c, lc)
                    a, b = lc // d, c // d
                    if a < 0:
                        a, b = -a, -b
                if a != 1:
                    p = {k: v * a for k, v in p.items()}
                    rem = {k: v * a for k, v in rem.items()}
                    scale *= a
                shift = m - glm
                for gm, gc in g.items():
                    mono = gm + shift
                    v = p.get(mono)
                    if v is None:
                        p[mono] = (-b * gc) % mod if mod else -b * gc
                        heapq.heappush(heap, (-M.key(mono), mono))
                    else:
                        v -= b * gc
                        if mod:
                            v %= mod
                        if v:
                            p[mono] = v
                        else:
                            del p[mono]
                break
        else:
            if not full:
                rem.update(p)
                return rem, scale
            rem[m] = c
            del p[m]
    return rem, scale


def _spoly(f: dict, flm: int, g: dict, glm: int, lcm: int, mod: int = 0) -> dict:
    if mod:
        out = kernel.add(kernel.mul_monomial(f, lcm - flm, 1), kernel.mul_monomial(g, lcm - glm, 1), -1)
        return {k: v % mod for k, v in out.items() if v % mod}
    a, b = f[flm], g[glm]
    d = math.gcd(a, b)
    out = kernel.mul_monomial(f, lcm - flm, b // d)
    return kernel.add(out, kernel.mul_monomial(g, lcm - glm, a // d), -1)


# ---------------------------------------------------------------- Buchberger

def _check_input(gens: list[Polynomial]) -> VariableRegistry:
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    reg = gens[0].reg
    for g in gens:
        if g.reg is not reg:
            raise ValueError("generators over different registries")
        if g.atoms():
            raise ValueError("expand atoms before computing a Gröbner basis")
    return reg


def buchberger(gens: list[Polynomial], order: str | None = None, caps: Caps | None = None,
               verify: bool = True, modulus: int = 0) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Pairs are taken in sugar order; pairs with coprime leading monomials and
    pairs covered by the chain criterion are skipped. Raises
    :class:`ResourceCapExceeded` instead of returning a partial basis.

    With a prime ``modulus`` the computation runs over Z/p; the returned
    generators then carry coefficients in 0..p−1 and only the leading
    monomials (hence :func:`ideal_codim`) are meaningful over the rationals,
    with high probability.
    """
    reg = _check_input(gens)
    order = order or reg.order
    caps = caps or Caps()
    M = _Mono(len(reg), order)
    clock = _Clock(caps.deadline())
    stats = {"pairs": 0, "reductions_to_zero": 0, "coprime": 0, "chain": 0}
    try:
        red = _buchberger(gens, M, caps, clock, stats, modulus)
        if verify and not _s_pairs_reduce(red, M, clock, modulus):
            raise AssertionError("post-verification failed: an S-polynomial does not reduce to zero")
    except _Timeout:
        raise ResourceCapExceeded("time", stats) from None
    stats["basis"] = len(red)
    if not red:
        return GroebnerBasis([reg.zero()], order, True, stats)
    if modulus:
        out = [Polynomial(reg, p) for _, p in red]
        stats["modulus"] = modulus
    else:
        out = [Polynomial(reg, kernel.scale(p, Fraction(1, p[lm]))) for lm, p in red]
    return GroebnerBasis(out, order, True, stats)


def _buchberger(gens, M: _Mono, caps: Caps, clock: _Clock, stats: dict, mod: int = 0) -> list[tuple[int, dict]]:
    polys: list[dict] = []
    leads: list[int] = []
    sugar: list[int] = []
    live: list[bool] = []
    done: set[tuple[int, int]] = set()  # pairs already treated, in treatment order
    heap: list = []
    counter = 0

    def cap(what):
        stats["basis"] = len(polys)
        raise ResourceCapExceeded(what, stats)

    def insert(p: dict, s: int):
        nonlocal counter
        lm = M.lead(p)
        if M.deg(lm) > caps.max_degree or any(e >= _HALF for e in lm.to_bytes(M.n, "little")):
            cap("degree")
        p = _monic_mod(p, lm, mod) if mod else _primitive(p, lm)
        k = len(polys)
        polys.append(p)
        leads.append(lm)
        sugar.append(s)
        live.append(True)
        for i in range(k):
            if not live[i]:
                continue
            lc = M.lcm(leads[i], lm)
            si = max(sugar[i] + M.deg(lc) - M.deg(leads[i]), s + M.deg(lc) - M.deg(lm))
            heapq.heappush(heap, (si, M.key(lc), counter, i, k, lc))
            counter += 1
        # older elements whose leading monomial the new one divides are redundant
        for i in range(k):
            if live[i] and M.divides(lm, leads[i]):
                live[i] = False
        if len(polys) > caps.max_basis:
            cap("basis size")

    for g in gens:
        if g.is_zero():
            continue
        d = _to_mod(g.raw, mod) if mod else _integral(g.raw)
        if d:
            insert(d, M.deg(M.lead(d)))
    if not polys:
        return []

    while heap and leads[-1] != 0:
        stats["pairs"] += 1
        if stats["pairs"] > caps.max_pairs:
            cap("pairs")
        s, _, _, i, j, lc = heapq.heappop(heap)
        done.add((i, j))
        if M.coprime(leads[i], leads[j]):
            stats["coprime"] += 1
            continue
        if any(k != i and k != j and M.divides(leads[k], lc)
               and (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done
               for k in range(len(polys))):
            stats["chain"] += 1
            continue
        sp = _spoly(polys[i], leads[i], polys[j], leads[j], lc, mod)
        basis = [(leads[k], polys[k]) for k in range(len(polys)) if live[k]]
        r, _ = _reduce(sp, basis, M, False, clock, mod)
        if not r:
            stats["reductions_to_zero"] += 1
            continue
        insert(r, s)

    basis = [(leads[k], polys[k]) for k in range(len(polys)) if live[k]]
    return _interreduce(basis, M, clock, mod)


def _interreduce(basis: list[tuple[int, dict]], M: _Mono, clock: _Clock | None = None,
                 mod: int = 0) -> list[tuple[int, dict]]:
    """Minimal, tail-reduced, primitive basis sorted by decreasing leading monomial."""
    if any(lm == 0 for lm, _ in basis):
        return [(0, {0: 1})]
    minimal = [(lm, p) for lm, p in basis
               if not any(olm != lm and M.divides(olm, lm) for olm, _ in basis)]
    seen, uniq = set(), []
    for lm, p in minimal:
        if lm not in seen:
            seen.add(lm)
            uniq.append((lm, p))
    out = []
    for idx, (lm, p) in enumerate(uniq):
        others = [b for k, b in enumerate(uniq) if k != idx]
        tail = dict(p)
        lc = tail.pop(lm)
        if tail:
            tail, sc = _reduce(tail, others, M, True, clock, mod)
        else:
            sc = 1
        tail[lm] = lc * sc
        out.append((lm, tail if mod else _primitive(tail, lm)))
    out.sort(key=lambda t: M.key(t[0]), reverse=True)
    return out


def _s_pairs_reduce(basis: list[tuple[int, dict]], M: _Mono, clock: _Clock | None = None,
                    mod: int = 0) -> bool:
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            (la, pa), (lb, pb) = basis[a], basis[b]
            if M.coprime(la, lb):
                continue
            sp = _spoly(pa, la, pb, lb, M.lcm(la, lb), mod)
            if _reduce(sp, basis, M, True, clock, mod)[0]:
                return False
    return True


def _engine_basis(gb: GroebnerBasis, M: _Mono) -> list[tuple[int, dict]]:
    out = []
    for g in gb.gens:
        if g.is_zero():
            continue
        d = _integral(g.raw)
        out.append((M.lead(d), d))
    return out


def is_groebner(gb: GroebnerBasis) -> bool:
    """Full S-polynomial test (coprime pairs skipped by the first criterion)."""
    if not any(not g.is_zero() for g in gb.gens):
        return True
    M = _Mono(len(gb.reg), gb.order)
    return _s_pairs_reduce(_engine_basis(gb, M), M)


# ---------------------------------------------------------------- normal form

def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of p on division by the basis; zero iff p lies in the ideal."""
    if p.is_zero() or not any(not g.is_zero() for g in gb.gens):
        return p
    if p.reg is not gb.reg:
        raise ValueError("polynomial and basis over different registries")
    M = _Mono(len(p.reg), gb.order)
    raw = p.raw
    den = 1
    for c in raw.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    r, sc = _reduce(_integral(raw), _engine_basis(gb, M), M, True)
    return Polynomial(p.reg, kernel.scale(r, Fraction(1, sc * den)))


# ---------------------------------------------------------------- codimension

def _supports(gb: GroebnerBasis) -> list[frozenset[int]]:
    n = len(gb.reg)
    out = set()
    for lm in gb.leading_monomials():
        out.add(frozenset(i for i, e in enumerate(lm.to_bytes(n, "little")) if e))
    # keep only inclusion-minimal supports
    return [s for s in out if not any(o < s for o in out)]


def min_hitting_set(sets: list[frozenset[int]]) -> int:
    """Size of a smallest set of variables meeting every support."""
    best = [math.inf]

    def rec(remaining: list[frozenset[int]], chosen: int):
        if chosen >= best[0]:
            return
        if not remaining:
            best[0] = chosen
            return
        pivot = min(remaining, key=len)
        for v in sorted(pivot):
            rec([s for s in remaining if v not in s], chosen + 1)

    rec(sorted(sets, key=len), 0)
    return best[0]


def ideal_codim(gb: GroebnerBasis) -> int | float:
    """Codimension of the ideal in the polynomial ring on the registry.

    The complement of a maximal independent set of variables is a smallest set
    meeting the support of every leading monomial, so the codimension is the
    size of such a hitting set. The unit ideal returns ``math.inf``; the zero
    ideal returns 0.
    """
    if gb.is_unit():
        return math.inf
    sets = [s for s in _supports(gb)]
    if not sets:
        return 0
    return min_hitting_set(sets)
