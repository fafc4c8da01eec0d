"""Buchsbaum–Eisenbud acyclicity assessment.

A length-3 complex 0 → F3 → F2 → F1 → R is acyclic when rank d_k equals the
expected rank and the ideal of maximal nonvanishing minors of d_k has grade
at least k. Over a polynomial ring with field coefficients grade equals
height, which Gröbner bases compute as codimension.

Every number carries a method tag:

* ``certified``: exact (Gröbner codimension, vanishing of all larger minors,
  or a nonzero value at a point for rank lower bounds);
* ``probabilistic``: random integer evaluation or specialization;
* ``skipped``: over budget, no claim made.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .complex import ChainComplex, compose_check, expected_ranks, is_identically_zero
from .groebner import Caps, ResourceCapExceeded, budget_seconds, buchberger, ideal_codim
from .matrix import PolyMatrix, atom_images, numeric_rank
from .poly import Polynomial, VariableRegistry, sum_of_products

CERTIFIED, PROBABILISTIC, SKIPPED = "certified", "probabilistic", "skipped"
GRADE_UNIT = math.inf  # grade of the unit ideal: exceeds every target
EVAL_RANGE = 10 ** 4
EVAL_POINTS = 3
SECTION_RANGE = 100            # coefficients of the random affine sections
SECTION_PRIME = 2 ** 31 - 1    # section Gröbner bases run over Z/p
RANK_TERM_FACTOR = 50          # rank certification may expand minors this far past max_terms


@dataclass(frozen=True)
class Budget:
    """Resource limits for the exact checks; all caps are inclusive."""
    seconds: float | None = None    # Gröbner wall time per ideal (None: RESFORGE_BUDGET_MS or 30 s)
    max_minors: int = 400           # minors enumerated for a certified check
    max_terms: int = 20000          # expanded terms allowed in certified inputs
    max_pairs: int = 20000
    draws: int = 3                  # random sections tried by a probabilistic grade check

    def caps(self) -> Caps:
        return Caps(max_pairs=self.max_pairs, seconds=self.seconds)

    @property
    def exhausted(self) -> bool:
        return (budget_seconds() if self.seconds is None else self.seconds) <= 0


@dataclass
class RankResult:
    rank: int
    tag: str


@dataclass
class GradeResult:
    bound: int | float
    tag: str
    note: str = ""


@dataclass
class ExactnessReport:
    compose_ok: tuple[bool, bool]
    expected: tuple[int, int, int]
    ranks: list[RankResult]
    grades: list[GradeResult]
    verdict: str
    seed: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        g = [{"bound": "inf" if x.bound == GRADE_UNIT else x.bound, "tag": x.tag, "note": x.note}
             for x in self.grades]
        return {"compose": list(self.compose_ok), "expected_ranks": list(self.expected),
                "ranks": [{"rank": r.rank, "tag": r.tag} for r in self.ranks], "grades": g,
                "verdict": self.verdict, "seed": self.seed, "notes": list(self.notes)}


# ---------------------------------------------------------------- evaluation

def random_point(reg: VariableRegistry, rng: random.Random) -> dict[int, int]:
    """Integers in [−10⁴, 10⁴] for the plain variables, atoms evaluated from them."""
    values: dict[int, object] = {}
    atoms = []
    for i, v in enumerate(reg):
        if v.role == "atom":
            atoms.append(i)
        else:
            values[i] = rng.randint(-EVAL_RANGE, EVAL_RANGE)
    if atoms:
        # recipes share sub-determinants; far cheaper than expanding definitions
        scalars = VariableRegistry()
        consts = {i: scalars.const(v) for i, v in values.items()}
        for i, p in atom_images(reg, consts, scalars).items():
            values[i] = p.constant()
    return values


def evaluate_matrix(m: PolyMatrix, values) -> list[list[object]]:
    return [[x.evaluate(values) if x else 0 for x in r] for r in m.grid]


# ---------------------------------------------------------------- minors

def _minors_of_rows(m: PolyMatrix, rows: tuple[int, ...], r: int, max_terms: int | None = None):
    """Yield (cols, det) for every r-subset of columns, sharing one memo.

    With ``max_terms`` any partial determinant whose expansion may exceed that
    many terms raises :class:`OverBudget`.
    """
    reg = m.reg
    memo: dict = {}

    def det(k: int, cols: tuple[int, ...]) -> Polynomial:
        if k == r:
            return reg.one()
        key = (k, cols)
        got = memo.get(key)
        if got is not None:
            return got
        row = m.grid[rows[k]]
        pairs = []
        for pos, c in enumerate(cols):
            e = row[c]
            if e.is_zero():
                continue
            sub = det(k + 1, cols[:pos] + cols[pos + 1:])
            if not sub.is_zero():
                pairs.append((e if pos % 2 == 0 else -e, sub))
        out = sum_of_products(reg, pairs)
        if max_terms is not None and expanded_size_estimate(out) > max_terms:
            raise OverBudget(f"partial minor exceeds {max_terms} terms")
        memo[key] = out
        return out

    for cols in combinations(range(m.cols), r):
        yield cols, det(0, cols)


def all_minors(m: PolyMatrix, r: int, max_terms: int | None = None):
    """Yield ((rows, cols), minor) for all r×r minors (atoms unexpanded)."""
    if not 0 <= r <= min(m.rows, m.cols):
        raise ValueError(f"minor size {r} out of range for a {m.rows}x{m.cols} matrix")
    for rows in combinations(range(m.rows), r):
        for cols, d in _minors_of_rows(m, rows, r, max_terms):
            yield (rows, cols), d


def _normalize_sign(p: Polynomial) -> Polynomial:
    """Make the coefficient of the largest packed monomial positive (a canonical, order-free choice)."""
    if p.is_zero():
        return p
    return -p if p.raw[max(p.raw)] < 0 else p


class OverBudget(Exception):
    pass


def minors_ideal(m: PolyMatrix, r: int, max_terms: int | None = None) -> list[Polynomial]:
    """All nonzero r×r minors, expanded, sign-normalized and deduplicated.

    With ``max_terms`` the enumeration stops with :class:`OverBudget` once the
    generators collected so far exceed that many terms.
    """
    seen: dict[Polynomial, None] = {}
    total = 0
    for _, d in all_minors(m, r):
        d = _normalize_sign(d.expand())
        if not d.is_zero() and d not in seen:
            seen[d] = None
            total += len(d)
            if max_terms is not None and total > max_terms:
                raise OverBudget(f"minors exceed {max_terms} terms")
    return list(seen)


def minor_count(m: PolyMatrix, r: int) -> int:
    return math.comb(m.rows, r) * math.comb(m.cols, r)


def expanded_size_estimate(p: Polynomial) -> int:
    """Upper bound on the number of terms of ``p.expand()``."""
    reg = p.reg
    n = len(reg)
    total = 0
    for mono in p.raw:
        t = 1
        for i, e in enumerate(mono.to_bytes(n, "little")):
            if e and reg.variable(i).role == "atom":
                t *= len(reg.variable(i).definition) ** e
        total += t
    return total


# ---------------------------------------------------------------- ranks

def matrix_rank(m: PolyMatrix, mode: str = "probabilistic", seed: int = 0,
                points: int = EVAL_POINTS, budget: Budget | None = None) -> RankResult:
    """Rank over the fraction field.

    The probabilistic rank is the largest rank seen at ``points`` random
    integer points; it is always a valid lower bound. Certified mode adds the
    upper bound by checking that every (r+1)-minor vanishes identically, and
    falls back to the probabilistic tag when that is over budget.
    """
    if mode not in ("probabilistic", "certified"):
        raise ValueError(f"unknown rank mode {mode!r}")
    budget = budget or Budget()
    rng = random.Random(seed)
    r = 0
    if not m.is_zero():
        for _ in range(points):
            r = max(r, numeric_rank(evaluate_matrix(m, random_point(m.reg, rng))))
            if r == min(m.rows, m.cols):
                break
    if m.is_zero():
        return RankResult(0, CERTIFIED)
    if r == min(m.rows, m.cols):
        return RankResult(r, CERTIFIED)  # lower bound met the trivial upper bound
    if mode == "probabilistic":
        return RankResult(r, PROBABILISTIC)
    if budget.exhausted or minor_count(m, r + 1) > budget.max_minors:
        return RankResult(r, PROBABILISTIC)
    try:
        for _, d in all_minors(m, r + 1, RANK_TERM_FACTOR * budget.max_terms):
            if not is_identically_zero(d):
                raise AssertionError("a random evaluation missed a nonzero minor; rerun with another seed")
    except OverBudget:
        return RankResult(r, PROBABILISTIC)
    return RankResult(r, CERTIFIED)


# ---------------------------------------------------------------- grades

def grade_lower_bound(gens: list[Polynomial], target: int, budget: Budget | None = None,
                      seed: int = 0) -> GradeResult:
    """Lower bound for the grade of (gens) in its polynomial ring.

    Certified bounds are Gröbner codimensions. When Buchberger hits a cap the
    ideal is restricted to a random affine subspace instead (see
    :func:`section_grade`) and the result is tagged probabilistic.
    """
    budget = budget or Budget()
    gens = [g.expand() for g in gens]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GradeResult(0, CERTIFIED, "zero ideal")
    if any(g.is_constant() for g in gens):
        return GradeResult(GRADE_UNIT, CERTIFIED, "unit ideal")
    if budget.exhausted:
        return GradeResult(0, SKIPPED, "budget exhausted")
    if sum(len(g) for g in gens) <= budget.max_terms:
        try:
            gb = buchberger(gens, caps=budget.caps())
            return GradeResult(ideal_codim(gb), CERTIFIED, "groebner codimension")
        except ResourceCapExceeded as exc:
            note = f"groebner capped ({exc.what})"
    else:
        note = "generators over the term budget"
    return section_grade(lambda mapping, reg: [g.substitute(mapping, reg) for g in gens],
                         gens[0].reg, target, budget, seed, note)


def _affine_section(reg: VariableRegistry, dim: int, rng: random.Random):
    """Map every plain variable to a random affine form in ``dim`` new variables.

    Atoms are mapped through :func:`atom_images`.
    """
    target = VariableRegistry(order=reg.order)
    ts = [target.gen(target.add(f"t_{k}")) for k in range(1, dim + 1)]
    mapping: dict[int, Polynomial] = {}
    for i, v in enumerate(reg):
        if v.role == "atom":
            continue
        form = target.const(rng.randint(-SECTION_RANGE, SECTION_RANGE))
        for t in ts:
            form = form + t * rng.randint(-SECTION_RANGE, SECTION_RANGE)
        mapping[i] = form
    mapping.update(atom_images(reg, mapping, target))
    return target, mapping


def section_grade(specialize, reg: VariableRegistry, target: int, budget: Budget, seed: int,
                  note: str) -> GradeResult:
    """Probabilistic grade bound from a random affine section of dimension ``target``.

    For a generic affine subspace L of dimension k, V(I) ∩ L has codimension
    codim V(I) inside L when codim V(I) ≤ k and is empty otherwise. So the
    codimension of the restricted ideal in k = target variables is either the
    true codimension (below target) or the whole ring is cut out, giving a
    bound of k + 1. The Gröbner step runs modulo a large prime.
    """
    if target <= 0:
        return GradeResult(0, CERTIFIED, "trivial target")
    rng = random.Random(seed)
    best = None
    for _ in range(budget.draws):
        sreg, mapping = _affine_section(reg, target, rng)
        sgens = [g for g in specialize(mapping, sreg) if not g.is_zero()]
        if not sgens:
            codim = 0
        elif any(g.is_constant() for g in sgens):
            codim = target + 1
        else:
            try:
                gb = buchberger(sgens, caps=budget.caps(), verify=False, modulus=SECTION_PRIME)
            except ResourceCapExceeded:
                continue
            codim = ideal_codim(gb)
            if codim == GRADE_UNIT:
                codim = target + 1
        best = codim if best is None else max(best, codim)
        if best >= target:
            break
    if best is None:
        return GradeResult(0, SKIPPED, note + "; section groebner capped too")
    return GradeResult(best, PROBABILISTIC, note + f"; random affine section of dimension {target}")


def matrix_grade(m: PolyMatrix, r: int, target: int, budget: Budget | None = None,
                 seed: int = 0) -> GradeResult:
    """Grade bound for the ideal of r×r minors of m.

    Small matrices go through :func:`minors_ideal`; larger ones are first
    restricted to a random affine section so only small minors get computed.
    """
    budget = budget or Budget()
    if budget.exhausted:
        return GradeResult(0, SKIPPED, "budget exhausted")
    if r == 0:
        return GradeResult(GRADE_UNIT, CERTIFIED, "unit ideal")
    fits = (minor_count(m, r) <= budget.max_minors
            and sum(expanded_size_estimate(x) for x in m.entries()) * r <= budget.max_terms)
    if fits:
        try:
            gens = minors_ideal(m, r, budget.max_terms)
        except OverBudget:
            gens = None
    if fits and gens is not None:
        if not gens:
            return GradeResult(0, CERTIFIED, "all minors vanish")
        if target <= 1:
            return GradeResult(1, CERTIFIED, "nonzero minor in a domain")
        return grade_lower_bound(gens, target, budget, seed)
    if target <= 1:
        # a nonzero r-minor at an integer point is a nonzero polynomial
        rng = random.Random(seed)
        for _ in range(EVAL_POINTS):
            if numeric_rank(evaluate_matrix(m, random_point(m.reg, rng))) >= r:
                return GradeResult(1, CERTIFIED, "nonzero minor in a domain")
    return section_grade(lambda mapping, reg: minors_ideal(m.substitute(mapping, reg), r),
                         m.reg, target, budget, seed, "minors ideal over the certified budget")


# ---------------------------------------------------------------- report

def verdict_for(compose_ok, expected, ranks: list[RankResult], grades: list[GradeResult]) -> str:
    """Decision table.

    failed: composition fails, a rank differs from the expected one, or a
    certified grade is below its target. acyclic-certified: every rank and
    grade certified and on target. acyclic-probable: on target with some
    probabilistic entry. indeterminate: anything skipped or a probabilistic
    grade below target.
    """
    if not all(compose_ok):
        return "failed"
    if any(r.rank != e for r, e in zip(ranks, expected)):
        return "failed"
    targets = (1, 2, 3)
    if any(g.tag == CERTIFIED and g.bound < t for g, t in zip(grades, targets)):
        return "failed"
    if any(g.tag == SKIPPED for g in grades) or any(g.bound < t for g, t in zip(grades, targets)):
        return "indeterminate"
    tags = {x.tag for x in ranks} | {g.tag for g in grades}
    return "acyclic-certified" if tags == {CERTIFIED} else "acyclic-probable"


def buchsbaum_eisenbud_report(c: ChainComplex, budget: Budget | None = None, seed: int = 0,
                              rank_mode: str = "certified", checks=("compose", "rank", "grade")) -> ExactnessReport:
    """Compose, rank and grade checks with a verdict.

    Checks left out of ``checks`` are reported as skipped. Over a polynomial
    ring with field coefficients, grade is computed as codimension (such rings
    are Cohen–Macaulay, so height and grade agree).
    """
    budget = budget or Budget()
    expected = expected_ranks(c.fmt)
    notes = ["grade computed as codimension in a polynomial ring over the rationals"]
    compose_ok = tuple(compose_check(c)) if "compose" in checks else (True, True)
    if "compose" not in checks:
        notes.append("compose check not requested")
    ds = c.differentials
    if "rank" in checks:
        ranks = [matrix_rank(d, rank_mode, seed=seed + k, budget=budget) for k, d in enumerate(ds)]
    else:
        ranks = [RankResult(e, SKIPPED) for e in expected]
    if "grade" in checks and all(compose_ok):
        grades = [matrix_grade(d, e, k + 1, budget, seed=seed + k) for k, (d, e) in enumerate(zip(ds, expected))]
    else:
        grades = [GradeResult(0, SKIPPED, "not requested" if "grade" not in checks else "composition failed")
                  for _ in ds]
    if "rank" not in checks:
        verdict = "failed" if not all(compose_ok) else "indeterminate"
    else:
        verdict = verdict_for(compose_ok, expected, ranks, grades)
    return ExactnessReport(compose_ok, expected, ranks, grades, verdict, seed, notes)
