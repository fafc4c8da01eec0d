"""File formats: the complex JSON schema, a matrix input format, and CAS exports.

Complex JSON::

    {"header": {"format", "variant", "parameters", "sign-conventions", "tool-version"},
     "variables": [name, ...],
     "variable-info": [{"role", "key", "definition"?}, ...],
     "metadata": {...},
     "differentials": {"d1": matrix, "d2": matrix, "d3": matrix}}

A polynomial is a list of ``[numerator, denominator, [[var-index, exponent], ...]]``
terms in the registry's canonical order, a matrix is a row-major list of rows.
Atoms keep their definitions, so files stay small and round-trip exactly.
"""
from __future__ import annotations

import ast
import json
import re
from fractions import Fraction
from typing import Any

from . import __version__
from .complex import ChainComplex, FormatSpec, expected_ranks
from .matrix import PolyMatrix
from .poly import BITS, ROLES, Polynomial, VariableRegistry

SCHEMA = "resforge-complex/1"
PARAM_NAME = {"dnn1": "n", "d4m": "m"}


class ParseError(ValueError):
    """Malformed input file."""


# ---------------------------------------------------------------- polynomials

def poly_to_json(p: Polynomial) -> list:
    out = []
    for c, vars_ in p.sparse_terms():
        c = Fraction(c)
        out.append([c.numerator, c.denominator, [[i, e] for i, e in vars_]])
    return out


def poly_from_json(reg: VariableRegistry, data) -> Polynomial:
    if not isinstance(data, list):
        raise ParseError("a polynomial must be a list of terms")
    n = len(reg)
    terms: dict[int, Fraction] = {}
    for t in data:
        try:
            num, den, mono = t
            c = Fraction(int(num), int(den))
            packed = 0
            for i, e in mono:
                i, e = int(i), int(e)
                if not (0 <= i < n) or not (0 < e < 1 << BITS):
                    raise ParseError(f"bad variable index or exponent in {t!r}")
                packed += e << (BITS * i)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad term {t!r}") from exc
        terms[packed] = terms.get(packed, 0) + c
    return Polynomial(reg, {m: (c.numerator if c.denominator == 1 else c)
                            for m, c in terms.items() if c})


def matrix_to_json(m: PolyMatrix) -> list:
    return [[poly_to_json(x) for x in row] for row in m.grid]


def matrix_from_json(reg: VariableRegistry, data, shape: tuple[int, int] | None = None) -> PolyMatrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("a matrix must be a list of rows")
    if data and len({len(r) for r in data}) != 1:
        raise ParseError("ragged matrix")
    grid = [[poly_from_json(reg, x) for x in row] for row in data]
    if shape is not None:
        rows, cols = shape
        if len(grid) != rows or (rows and len(grid[0]) != cols):
            raise ParseError(f"expected a {rows}x{cols} matrix")
        return PolyMatrix(reg, grid, rows, cols)
    return PolyMatrix(reg, grid)


# ---------------------------------------------------------------- complexes

def _key_to_json(key: tuple) -> list:
    return list(key)


def _key_from_json(key) -> tuple:
    if not isinstance(key, list) or not key:
        raise ParseError("variable key must be a non-empty list")
    return tuple(key)


def complex_to_dict(c: ChainComplex) -> dict:
    reg = c.reg
    info = []
    for v in reg:
        item: dict[str, Any] = {"role": v.role, "key": _key_to_json(v.key)}
        if v.definition is not None:
            item["definition"] = poly_to_json(v.definition)
        info.append(item)
    meta = {k: v for k, v in c.meta.items() if k != "sign-conventions"}
    return {
        "schema": SCHEMA,
        "header": {
            "format": c.fmt.family,
            "variant": c.fmt.variant,
            "parameters": {PARAM_NAME[c.fmt.family]: c.fmt.param},
            "sign-conventions": c.meta.get("sign-conventions", {}),
            "tool-version": __version__,
        },
        "variables": list(reg.names),
        "variable-info": info,
        "metadata": meta,
        "differentials": {f"d{k}": matrix_to_json(d) for k, d in enumerate(c.differentials, 1)},
    }


def _depth(x) -> int:
    if isinstance(x, list):
        return 1 + max((_depth(y) for y in x), default=0)
    return 0


def _nested(v) -> bool:
    return isinstance(v, dict) or _depth(v) > 1 or (isinstance(v, list) and any(isinstance(y, dict) for y in v))


def _dump(x, pad: str) -> str:
    # polynomials (list depth <= 4) and scalars go on one line
    if isinstance(x, dict) and x and any(_nested(v) for v in x.values()):
        inner = pad + " "
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_dump(v, inner)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and x and (_depth(x) > 4 or any(isinstance(y, dict) for y in x)):
        inner = pad + " "
        return "[\n" + ",\n".join(inner + _dump(y, inner) for y in x) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False)


def dumps(obj: dict) -> str:
    """Deterministic JSON text: one polynomial per line, trailing newline."""
    return _dump(obj, "") + "\n"


def serialize_complex(c: ChainComplex) -> str:
    return dumps(complex_to_dict(c))


def _registry_from(names, info, order: str = "degrevlex") -> VariableRegistry:
    """Rebuild a registry; atom definitions may only use earlier plain variables."""
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise ParseError("variables must be a list of names")
    if info is not None and (not isinstance(info, list) or len(info) != len(names)):
        raise ParseError("variable-info must match the variable list")
    reg = VariableRegistry(order)
    for k, name in enumerate(names):
        item = info[k] if info is not None else {"role": "free"}
        if not isinstance(item, dict):
            raise ParseError("variable-info entries must be objects")
        role = item.get("role", "free")
        if role not in ROLES:
            raise ParseError(f"unknown role {role!r}")
        key = _key_from_json(item["key"]) if "key" in item else None
        definition = None
        if role == "atom":
            if "definition" not in item:
                raise ParseError(f"atom {name} lacks a definition")
            definition = poly_from_json(reg, item["definition"])
        try:
            reg.add(name, role, key, definition)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    return reg


def complex_from_dict(data: dict) -> ChainComplex:
    try:
        head = data["header"]
        family, variant = head["format"], head["variant"]
        params = head["parameters"]
        param = params[PARAM_NAME[family]]
        fmt = FormatSpec(family, variant, param)
        reg = _registry_from(data["variables"], data.get("variable-info"))
        _, r1, r2, r3 = fmt.ranks
        ds = data["differentials"]
        d1 = matrix_from_json(reg, ds["d1"], (1, r1))
        d2 = matrix_from_json(reg, ds["d2"], (r1, r2))
        d3 = matrix_from_json(reg, ds["d3"], (r2, r3))
        meta = dict(data.get("metadata", {}))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed complex file: {exc}") from exc
    if head.get("sign-conventions"):
        meta["sign-conventions"] = head["sign-conventions"]
    return ChainComplex(fmt, d1, d2, d3, meta)


def parse_complex(text: str) -> ChainComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    return complex_from_dict(data)


def same_complex(a: ChainComplex, b: ChainComplex) -> bool:
    """Structural equality across registries: same format, variables and canonical polynomials."""
    if a.fmt != b.fmt or a.reg.names != b.reg.names:
        return False
    if [(v.role, v.key) for v in a.reg] != [(v.role, v.key) for v in b.reg]:
        return False
    for va, vb in zip(a.reg, b.reg):
        if (va.definition is None) != (vb.definition is None):
            return False
        if va.definition is not None and va.definition.raw != vb.definition.raw:
            return False
    return all(x.raw == y.raw for da, db in zip(a.differentials, b.differentials)
               for x, y in zip(da.entries(), db.entries()))


# ---------------------------------------------------------------- expressions

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def parse_expression(reg: VariableRegistry, text: str) -> Polynomial:
    """Parse ``x*y - 2*z^2 + (1/3)*w`` style polynomial text over ``reg``.

    Names must already be in the registry. ``^`` and ``**`` both mean power.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}") from exc

    def ev(node) -> Polynomial:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return reg.const(node.value)
        if isinstance(node, ast.Name):
            if not reg.has(node.id):
                raise ParseError(f"unknown variable {node.id!r}")
            return reg.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                e = ev(node.right)
                if not e.is_constant() or Fraction(e.constant()).denominator != 1 or e.constant() < 0:
                    raise ParseError("exponents must be non-negative integers")
                return a ** int(e.constant())
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.is_constant() or b.is_zero():
                    raise ParseError("only division by nonzero constants is supported")
                return a * reg.const(1 / Fraction(b.constant()))
        raise ParseError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_matrix_file(text: str) -> PolyMatrix:
    """Matrix input for specialization.

    JSON object with ``variables`` (ordered names) and ``matrix`` (rows of
    polynomial strings or term lists)::

        {"variables": ["x", "y"], "matrix": [["x", "0"], ["y^2", "x - y"]]}
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    if not isinstance(data, dict) or "variables" not in data or "matrix" not in data:
        raise ParseError("matrix file needs 'variables' and 'matrix'")
    names, rows = data["variables"], data["matrix"]
    if not isinstance(names, list) or not all(isinstance(x, str) and _NAME.match(x) for x in names):
        raise ParseError("variables must be a list of identifiers")
    reg = VariableRegistry(data.get("order", "degrevlex"))
    for nm in names:
        if reg.has(nm):
            raise ParseError(f"duplicate variable {nm!r}")
        # Z, Z_1, Z_2 keep their role so specialization recognizes them
        m = re.fullmatch(r"Z(?:_(\d+))?", nm)
        if m:
            reg.add(nm, "Z", ("Z", int(m.group(1)) if m.group(1) else None))
        else:
            reg.add(nm)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a non-empty list of rows")
    if len({len(r) for r in rows}) != 1:
        raise ParseError("ragged matrix")
    grid = [[parse_expression(reg, x) if isinstance(x, str) else
             reg.const(x) if isinstance(x, int) else poly_from_json(reg, x) for x in r] for r in rows]
    return PolyMatrix(reg, grid)


def matrix_file_text(m: PolyMatrix) -> str:
    return dumps({"variables": list(m.reg.names), "matrix": [[str(x) for x in r] for r in m.grid]})


# ---------------------------------------------------------------- exports

def _ascii(p: Polynomial) -> str:
    return str(p).replace("(", "").replace(")", "") if not any(
        isinstance(c, Fraction) for c in p.raw.values()) else str(p)


def _plain_vars(c: ChainComplex) -> list[str]:
    return [v.name for v in c.reg if v.role != "atom"]


def _expanded(c: ChainComplex) -> ChainComplex:
    return c.expanded()


def export_m2(c: ChainComplex) -> str:
    c = _expanded(c)
    ranks = expected_ranks(c.fmt)
    lines = [f"-- {c.fmt.label}: format {c.fmt.ranks}",
             f"-- expected ranks of d1, d2, d3: {ranks}",
             "-- check: d1*d2 == 0, d2*d3 == 0, and rank of each d_k",
             f"R = QQ[{', '.join(_plain_vars(c))}]"]
    for k, d in enumerate(c.differentials, 1):
        rows = ",\n  ".join("{" + ", ".join(_ascii(x) for x in r) + "}" for r in d.grid)
        lines.append(f"d{k} = matrix{{\n  {rows}}}")
    lines += ["assert(d1*d2 == 0)", "assert(d2*d3 == 0)",
              f"assert(rank d1 == {ranks[0]} and rank d2 == {ranks[1]} and rank d3 == {ranks[2]})"]
    return "\n".join(lines) + "\n"


def export_singular(c: ChainComplex) -> str:
    c = _expanded(c)
    ranks = expected_ranks(c.fmt)
    lines = [f"// {c.fmt.label}: format {c.fmt.ranks}",
             f"// expected ranks of d1, d2, d3: {ranks}",
             f"ring R = 0, ({', '.join(_plain_vars(c))}), dp;"]
    for k, d in enumerate(c.differentials, 1):
        body = ",\n  ".join(", ".join(_ascii(x) for x in r) for r in d.grid)
        lines.append(f"matrix d{k}[{d.rows}][{d.cols}] =\n  {body};")
    lines += ["print(size(module(d1*d2)) == 0);", "print(size(module(d2*d3)) == 0);"]
    return "\n".join(lines) + "\n"


def _latex_name(name: str) -> str:
    base, *idx = name.split("_")
    return f"{base}_{{{','.join(idx)}}}" if idx else base


def latex_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    names = p.reg.names
    parts = []
    for coeff, vars_ in p.sparse_terms():
        mono = " ".join(_latex_name(names[i]) + (f"^{{{e}}}" if e > 1 else "") for i, e in vars_)
        c = Fraction(coeff)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mag = (f"\\frac{{{a.numerator}}}{{{a.denominator}}}" if a.denominator != 1
               else ("" if a == 1 and mono else str(a.numerator)))
        parts.append((sign, (mag + " " + mono).strip()))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def export_latex(c: ChainComplex) -> str:
    lines = [f"% {c.fmt.label}: format {c.fmt.ranks}"]
    for k, d in enumerate(c.differentials, 1):
        rows = " \\\\\n".join(" & ".join(latex_poly(x) for x in r) for r in d.grid)
        lines.append(f"\\[\nd_{k} = \\begin{{pmatrix}}\n{rows}\n\\end{{pmatrix}}\n\\]")
    return "\n".join(lines) + "\n"


EXPORTERS = {"m2": export_m2, "singular": export_singular, "latex": export_latex}


def parse_m2_matrices(text: str) -> dict[str, PolyMatrix]:
    """Read back the ring and ``dk = matrix{...}`` blocks of an M2 export."""
    m = re.search(r"^R = QQ\[(.*)\]$", text, re.M)
    if not m:
        raise ParseError("no ring declaration")
    reg = VariableRegistry()
    for nm in (x.strip() for x in m.group(1).split(",")):
        reg.add(nm)
    out = {}
    for name, body in re.findall(r"^(d\d) = matrix\{(.*?)\}$", text, re.M | re.S):
        rows = re.findall(r"\{([^{}]*)\}", body)
        grid = [[parse_expression(reg, x) for x in _split_top(r)] for r in rows]
        out[name] = PolyMatrix(reg, grid)
    return out


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]
