"""Exact sparse multivariate polynomials over the rationals.

A monomial is packed into a single Python int with one byte per variable
(variable ``i`` occupies bits ``8i .. 8i+7``), so exponents are capped at 255.
Multiplying monomials is then integer addition. A polynomial is a dict from
packed monomials to nonzero ``int``/``Fraction`` coefficients; dict equality
is mathematical equality, and :meth:`Polynomial.terms` yields the canonical
ordering under the registry's monomial order.
"""
from __future__ import annotations

import functools
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernel

BITS = 8
MAX_EXP = (1 << BITS) - 1

ROLES = ("X", "b", "c", "Z", "free", "atom")


class RegistryMismatch(ValueError):
    pass


def _coerce(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, int):
        return int(v)
    raise TypeError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class Variable:
    name: str
    role: str
    key: tuple
    definition: "Polynomial | None" = None


class Monomial:
    """Exponent vector over a registry, with cached total degree."""

    __slots__ = ("exps", "degree")

    def __init__(self, exps: Iterable[int]):
        self.exps = tuple(int(e) for e in exps)
        if any(e < 0 or e > MAX_EXP for e in self.exps):
            raise ValueError("exponent out of range")
        self.degree = sum(self.exps)

    @classmethod
    def unpack(cls, packed: int, nvars: int) -> "Monomial":
        return cls(packed.to_bytes(nvars, "little"))

    def pack(self) -> int:
        return int.from_bytes(bytes(self.exps), "little")

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        return f"Monomial({self.exps})"


def order_key(order: str, nvars: int):
    """Sort key on packed monomials; larger key means larger monomial."""
    if order == "degrevlex":
        def key(m):
            bs = m.to_bytes(nvars, "little")
            return (sum(bs), bytes(MAX_EXP - e for e in reversed(bs)))
    elif order == "lex":
        def key(m):
            return m.to_bytes(nvars, "little")
    elif order == "deglex":
        def key(m):
            bs = m.to_bytes(nvars, "little")
            return (sum(bs), bs)
    else:
        raise ValueError(f"unknown monomial order {order!r}")
    return key


class VariableRegistry:
    """Ordered, append-only set of named indeterminates.

    Variables are looked up by role key: ``("X", i, j)``, ``("b", i, j)`` or
    ``("b", i, j, k)`` with i<j, ``("c", u, t)`` with u<t, ``("Z", t)``,
    ``("free", name)``. Atoms are named sub-expressions carrying a definition
    polynomial over the non-atom variables; see :meth:`Polynomial.expand`.
    """

    def __init__(self, order: str = "degrevlex"):
        order_key(order, 1)
        self.order = order
        self._vars: list[Variable] = []
        self._by_name: dict[str, int] = {}
        self._by_key: dict[tuple, int] = {}
        # optional structure of atoms: index -> ("minor", base, rows, cols, sign)
        # or ("pf", base, indices, sign), over the grids in ``bases``
        self.recipes: dict[int, tuple] = {}
        self.bases: dict[str, list[list["Polynomial"]]] = {}

    def __len__(self):
        return len(self._vars)

    def __iter__(self):
        return iter(self._vars)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self._vars]

    def variable(self, idx: int) -> Variable:
        return self._vars[idx]

    def index(self, name: str) -> int:
        return self._by_name[name]

    def has(self, name: str) -> bool:
        return name in self._by_name

    def add(self, name: str, role: str = "free", key: tuple | None = None,
            definition: "Polynomial | None" = None) -> int:
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        if name in self._by_name:
            raise ValueError(f"duplicate variable name {name!r}")
        key = key if key is not None else ("free", name) if role == "free" else (role, name)
        if key in self._by_key:
            raise ValueError(f"duplicate variable key {key!r}")
        if definition is not None:
            if definition.reg is not self:
                raise RegistryMismatch("atom definition over another registry")
            if any(self._vars[i].role == "atom" for i in definition.variables()):
                raise ValueError("atom definitions must not contain atoms")
        idx = len(self._vars)
        self._vars.append(Variable(name, role, key, definition))
        self._by_name[name] = idx
        self._by_key[key] = idx
        return idx

    def ensure(self, name: str, role: str = "free", key: tuple | None = None) -> int:
        if name in self._by_name:
            return self._by_name[name]
        return self.add(name, role, key)

    def atom(self, name: str, definition: "Polynomial", recipe: tuple | None = None) -> "Polynomial":
        """Register (or reuse) a named atom and return it as a variable.

        ``recipe`` optionally records the atom as a signed minor or pfaffian of
        a grid in :attr:`bases`, which lets ring maps skip the expanded definition.
        """
        if name in self._by_name:
            return self.gen(self._by_name[name])
        idx = self.add(name, "atom", ("atom", name), definition)
        if recipe is not None:
            if recipe[1] not in self.bases:
                raise ValueError(f"unknown recipe base {recipe[1]!r}")
            self.recipes[idx] = recipe
        return self.gen(idx)

    # ---- polynomial constructors ----
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        c = _coerce(c)
        return Polynomial(self, {0: c} if c else {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def gen(self, idx: int) -> "Polynomial":
        return Polynomial(self, {1 << (BITS * idx): 1})

    def var(self, name: str) -> "Polynomial":
        return self.gen(self._by_name[name])

    def by_key(self, key: tuple) -> "Polynomial":
        return self.gen(self._by_key[key])

    def has_key(self, key: tuple) -> bool:
        return key in self._by_key

    def X(self, i: int, j: int) -> "Polynomial":
        return self.by_key(("X", i, j))

    def b(self, i: int, j: int, k: int | None = None) -> "Polynomial":
        """Skew access to the defect variable b_{ij} (or b^k_{ij})."""
        if i == j:
            return self.zero()
        lo, hi = min(i, j), max(i, j)
        key = ("b", lo, hi) if k is None else ("b", lo, hi, k)
        p = self.by_key(key)
        return p if i < j else -p

    def c(self, u: int, t: int) -> "Polynomial":
        if u == t:
            return self.zero()
        p = self.by_key(("c", min(u, t), max(u, t)))
        return p if u < t else -p

    def Z(self, t: int | None = None) -> "Polynomial":
        return self.by_key(("Z", t))

    # ---- declarations ----
    def declare_X(self, rows: int, cols: int):
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                self.add(f"X_{i}_{j}", "X", ("X", i, j))

    def declare_b(self, n: int, m: int | None = None):
        """b_{ij} for i<j≤n, or b^k_{ij} for k≤m when m is given."""
        if m is None:
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    self.add(f"b_{i}_{j}", "b", ("b", i, j))
        else:
            for k in range(1, m + 1):
                for i in range(1, n + 1):
                    for j in range(i + 1, n + 1):
                        self.add(f"b_{i}_{j}_{k}", "b", ("b", i, j, k))

    def declare_c(self, m: int):
        for u in range(1, m + 1):
            for t in range(u + 1, m + 1):
                self.add(f"c_{u}_{t}", "c", ("c", u, t))

    def declare_Z(self, t: int | None = None) -> "Polynomial":
        name = "Z" if t is None else f"Z_{t}"
        return self.gen(self.add(name, "Z", ("Z", t)))

    def free(self, *names: str) -> list["Polynomial"]:
        return [self.gen(self.ensure(nm)) for nm in names]


def _check_same(a: "Polynomial", b: "Polynomial"):
    if a.reg is not b.reg:
        raise RegistryMismatch("polynomials live over different registries")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("reg", "_t", "_or", "_hash")

    def __init__(self, reg: VariableRegistry, terms: Mapping[int, object] | None = None,
                 *, normalized: bool = True):
        self.reg = reg
        t = dict(terms) if terms else {}
        self._t = t if normalized else kernel.normalize(t)
        self._or = None
        self._hash = None

    # ---- basic protocol ----
    @property
    def raw(self) -> dict:
        """The underlying monomial -> coefficient dict (do not mutate)."""
        return self._t

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant(self):
        return self._t.get(0, 0)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_same(self, other)
            return other
        return self.reg.const(other)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.reg is other.reg and self._t == other._t
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._t == ({0: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # ---- arithmetic ----
    def __add__(self, other):
        o = self._lift(other)
        return Polynomial(self.reg, kernel.add(self._t, o._t))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Polynomial(self.reg, kernel.add(self._t, o._t, -1))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Polynomial(self.reg, kernel.scale(self._t, -1))

    def _orbits(self) -> int:
        if self._or is None:
            self._or = functools.reduce(operator.or_, self._t, 0)
        return self._or

    def _guard(self, other: "Polynomial"):
        # OR of all monomials bounds every exponent from above; only fall back
        # to exact maxima when that crude bound says overflow is possible.
        a, b = self._orbits(), other._orbits()
        n = max(a.bit_length(), b.bit_length()) // BITS + 1
        ab, bb = a.to_bytes(n, "little"), b.to_bytes(n, "little")
        if all(x + y <= MAX_EXP for x, y in zip(ab, bb)):
            return
        ea, eb = self.max_exponents(), other.max_exponents()
        if any(x + y > MAX_EXP for x, y in zip(ea, eb)):
            raise OverflowError("exponent exceeds 255")

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            _check_same(self, other)
            if not self._t or not other._t:
                return Polynomial(self.reg)
            self._guard(other)
            return Polynomial(self.reg, kernel.mul(self._t, other._t))
        c = _coerce(other)
        return Polynomial(self.reg, kernel.scale(self._t, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _coerce(other)
        return Polynomial(self.reg, kernel.scale(self._t, Fraction(1) / c))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out, base = self.reg.one(), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def mul_term(self, mono: int, coeff) -> "Polynomial":
        return Polynomial(self.reg, kernel.mul_monomial(self._t, mono, coeff))

    # ---- inspection ----
    def max_exponents(self) -> list[int]:
        n = len(self.reg)
        out = [0] * n
        for m in self._t:
            for i, e in enumerate(m.to_bytes(n, "little")):
                if e > out[i]:
                    out[i] = e
        return out

    def variables(self) -> list[int]:
        bs = self._orbits().to_bytes(len(self.reg), "little")
        return [i for i, e in enumerate(bs) if e]

    def degree(self) -> int:
        if not self._t:
            return -1
        n = len(self.reg)
        return max(sum(m.to_bytes(n, "little")) for m in self._t)

    def degree_in(self, var_indices: Iterable[int]) -> int:
        idx = list(var_indices)
        n = len(self.reg)
        best = -1
        for m in self._t:
            bs = m.to_bytes(n, "little")
            best = max(best, sum(bs[i] for i in idx))
        return best

    def is_homogeneous_in(self, var_indices: Iterable[int]) -> bool:
        idx = list(var_indices)
        n = len(self.reg)
        degs = {sum(m.to_bytes(n, "little")[i] for i in idx) for m in self._t}
        return len(degs) <= 1

    def terms(self, order: str | None = None) -> list[tuple[Monomial, object]]:
        """Terms in decreasing order under the monomial order."""
        n = len(self.reg)
        key = order_key(order or self.reg.order, n)
        return [(Monomial.unpack(m, n), c)
                for m, c in sorted(self._t.items(), key=lambda kv: key(kv[0]), reverse=True)]

    def sparse_terms(self) -> list[tuple[object, list[tuple[int, int]]]]:
        """Canonically ordered (coeff, [(var, exp), ...]) pairs."""
        return [(c, [(i, e) for i, e in enumerate(mono.exps) if e])
                for mono, c in self.terms()]

    def leading(self, order: str | None = None) -> tuple[int, object]:
        key = order_key(order or self.reg.order, len(self.reg))
        m = max(self._t, key=key)
        return m, self._t[m]

    # ---- homomorphisms ----
    def substitute(self, mapping: Mapping[int, "Polynomial | int | Fraction"],
                   target: VariableRegistry | None = None) -> "Polynomial":
        """Ring homomorphism image.

        ``mapping`` sends variable indices to polynomials over ``target`` (or
        to rationals). Unmapped variables are carried over by name and must
        exist in the target registry.
        """
        target = self.reg if target is None else target
        n = len(self.reg)
        images: dict[int, Polynomial] = {}
        for idx in self.variables():
            var = self.reg.variable(idx)
            if idx in mapping:
                v = mapping[idx]
                images[idx] = v if isinstance(v, Polynomial) else target.const(v)
                if images[idx].reg is not target:
                    raise RegistryMismatch("substitution image over wrong registry")
            elif var.role == "atom" and target is not self.reg:
                images[idx] = var.definition.substitute(mapping, target)
            else:
                name = self.reg.variable(idx).name
                if not target.has(name):
                    raise KeyError(f"unmapped variable {name!r} absent from target registry")
                images[idx] = target.var(name)
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, e):
            p = powers.get((i, e))
            if p is None:
                p = images[i] if e == 1 else power(i, e - 1) * images[i]
                powers[(i, e)] = p
            return p

        acc: dict = {}
        for m, c in self._t.items():
            part = {0: c}
            for i, e in enumerate(m.to_bytes(n, "little")):
                if e:
                    p = power(i, e)
                    if not p._t:
                        part = {}
                        break
                    if len(p._t) == 1:
                        (pm, pc), = p._t.items()
                        part = kernel.mul_monomial(part, pm, pc)
                    else:
                        part = kernel.mul(part, p._t)
            if part:
                acc = kernel.add(acc, part) if len(acc) < len(part) else _iadd(acc, part)
        return Polynomial(target, kernel.normalize(acc))

    def evaluate(self, values: Mapping[int, object]):
        """Exact value at a point given as {variable index: rational}."""
        n = len(self.reg)
        maxe = self.max_exponents()
        powers = []
        for i in range(n):
            row = [1]
            if maxe[i]:
                v = values[i]
                for _ in range(maxe[i]):
                    row.append(row[-1] * v)
            powers.append(row)
        return kernel.evaluate(self._t, powers, n)

    def atoms(self) -> list[int]:
        return [i for i in self.variables() if self.reg.variable(i).role == "atom"]

    def expand(self) -> "Polynomial":
        """Replace every atom by its definition."""
        at = self.atoms()
        if not at:
            return self
        return self.substitute({i: self.reg.variable(i).definition for i in at})

    # ---- printing ----
    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._t:
            return "0"
        names = self.reg.names
        parts = []
        for coeff, vars_ in self.sparse_terms():
            mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in vars_)
            if not mono:
                s = str(coeff)
            elif coeff == 1:
                s = mono
            elif coeff == -1:
                s = "-" + mono
            else:
                s = f"{coeff}*{mono}" if not isinstance(coeff, Fraction) else f"({coeff})*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


def _iadd(acc: dict, part: dict) -> dict:
    for k, v in part.items():
        w = acc.get(k)
        if w is None:
            acc[k] = v
        else:
            w = w + v
            if w:
                acc[k] = w
            else:
                del acc[k]
    return acc


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_same(a, b)
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_same(a, b)
    return a * b


def poly_substitute(p: Polynomial, s) -> Polynomial:
    """Apply a :class:`resforge.specialize.Substitution` (or a plain mapping)."""
    if hasattr(s, "mapping"):
        return p.substitute(s.mapping, s.target)
    return p.substitute(s)


def linear_combination(reg: VariableRegistry, pairs: Iterable[tuple[object, Polynomial]]) -> Polynomial:
    """Sum of coeff*poly without intermediate Polynomial objects."""
    acc: dict = {}
    for c, p in pairs:
        if c and p._t:
            if p.reg is not reg:
                raise RegistryMismatch("linear_combination over mixed registries")
            for k, v in p._t.items():
                w = acc.get(k)
                v = v * c
                if w is None:
                    acc[k] = v
                else:
                    w = w + v
                    if w:
                        acc[k] = w
                    else:
                        del acc[k]
    return Polynomial(reg, acc, normalized=False)


def sum_of_products(reg: VariableRegistry, pairs: Iterable[tuple[Polynomial, Polynomial]]) -> Polynomial:
    """Σ a_i·b_i accumulated in one dict (the hot path of matrix products)."""
    acc: dict = {}
    for a, b in pairs:
        if a._t and b._t:
            if a.reg is not reg or b.reg is not reg:
                raise RegistryMismatch("sum_of_products over mixed registries")
            a._guard(b)
            kernel.addmul(acc, a._t, b._t)
    return Polynomial(reg, acc, normalized=False)
