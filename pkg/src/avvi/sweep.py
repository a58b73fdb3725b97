"""Bicriteria parameter sweep over xi = (t, 1 - t), t in [0, 1].

For each active pattern alpha the multipliers are removed through the
normal cone C_alpha = cone{a_i : i in alpha}: x is a solution on F_alpha at
parameter t iff x is in F_alpha and M(t) x + q(t) lies in C_alpha.  With
C_alpha = {w : E w = 0, G w >= 0} this is a linear system in x whose
coefficients are affine in t, so fraction-free elimination over Q[t] gives
the generic solution, the polynomials whose roots are the critical values,
and the sign conditions that decide on which cells a curve piece exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .avi import PatternPiece, solve_avi
from .fourier_motzkin import LinIneqSystem, fm_project, implicit_equalities, is_feasible
from .linalg import rref
from .model import AvviProblem, Unsupported, Weight, all_patterns, pattern_mask, pseudo_face, scalarize
from .poly import Poly, RatFunc, poly_gcd, squarefree_part
from .roots import ExactRoot, IntervalRoot, isolate_roots


class IrrationalCriticalValue(Unsupported):
    """A critical parameter is irrational and algebraic mode was not requested."""


class Mode(enum.Enum):
    WEAK = "weak"
    PARETO = "pareto"


ZERO = ExactRoot(Fraction(0))
ONE = ExactRoot(Fraction(1))


def root_value(root):
    """Exact value of a critical value: Fraction or AlgebraicNumber."""
    return root.exact_value()


def same_root(a, b) -> bool:
    if isinstance(a, ExactRoot) and isinstance(b, ExactRoot):
        return a.value == b.value
    return a is b


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval (lo, hi)."""
    if lo >= hi:
        raise ValueError("empty interval")
    fl = lo.__floor__()
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # continued-fraction descent on (lo - fl, hi - fl), both inside [0, 1]
    a, b = lo - fl, hi - fl
    if a == 0:
        k = 1
        while Fraction(1, k) >= b:
            k += 1
        return fl + Fraction(1, k)
    inner = simplest_between(1 / b, 1 / a)
    return fl + 1 / inner


def _bounds(root) -> tuple[Fraction, Fraction]:
    return root.lo, root.hi


def rational_between(lo_root, hi_root) -> Fraction:
    """A simple rational strictly between two distinct ordered roots."""
    while True:
        a = lo_root.hi if isinstance(lo_root, IntervalRoot) else lo_root.value
        b = hi_root.lo if isinstance(hi_root, IntervalRoot) else hi_root.value
        if a < b:
            return simplest_between(a, b)
        if isinstance(lo_root, IntervalRoot):
            lo_root = lo_root.refined((lo_root.hi - lo_root.lo) / 2)
        if isinstance(hi_root, IntervalRoot):
            hi_root = hi_root.refined((hi_root.hi - hi_root.lo) / 2)


@dataclass(frozen=True, eq=False)
class IntervalCell:
    lo: object  # ExactRoot | IntervalRoot
    hi: object
    lo_closed: bool = False
    hi_closed: bool = False

    @cached_property
    def sample(self) -> Fraction:
        return rational_between(self.lo, self.hi)

    def contains_value(self, t: Fraction) -> bool:
        lo_ok = (t >= self.lo.value) if self.lo_closed else _strictly_above(t, self.lo)
        hi_ok = (t <= self.hi.value) if self.hi_closed else _strictly_below(t, self.hi)
        return lo_ok and hi_ok

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True, eq=False)
class PointCell:
    root: object

    @property
    def value(self):
        return root_value(self.root)

    def __str__(self):
        return f"{{{self.root}}}"


def _strictly_above(t: Fraction, root) -> bool:
    if isinstance(root, ExactRoot):
        return t > root.value
    return root.field.element(Poly.const(t)) > root.field.generator()


def _strictly_below(t: Fraction, root) -> bool:
    if isinstance(root, ExactRoot):
        return t < root.value
    return root.field.element(Poly.const(t)) < root.field.generator()


def decompose_cells(criticals: Sequence, mode: Mode) -> list:
    """Split [0, 1] (weak) or (0, 1) (Pareto) at the critical values."""
    closed = mode is Mode.WEAK
    pts = [r for r in criticals if closed or not (same_root(r, ZERO) or same_root(r, ONE))]
    cells: list = []
    lo, lo_closed = ZERO, closed
    for r in pts:
        if same_root(r, ZERO):
            cells.append(PointCell(r))
            lo_closed = False
            continue
        cells.append(IntervalCell(lo, r, lo_closed, False))
        cells.append(PointCell(r))
        lo, lo_closed = r, False
    if not (pts and same_root(pts[-1], ONE)):
        cells.append(IntervalCell(lo, ONE, lo_closed, closed))
    return cells


# ---------------------------------------------------------------------------
# parametric elimination over Q[t]


def _bareiss(rows: list[list[Poly]], ncols: int):
    """Fraction-free echelon form of an augmented polynomial matrix.

    Returns (rows, pivot columns, last pivot).  Entries below the pivots are
    minors of the input, so the last pivot is a nonzero rank-size minor.
    """
    a = [list(r) for r in rows]
    R = len(a)
    prev = Poly.const(1)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        cand = [i for i in range(r, R) if not a[i][col].is_zero()]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (a[i][col].degree, i))
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        for i in range(r + 1, R):
            f = a[i][col]
            for j in range(col + 1, ncols + 1):
                v = p * a[i][j]
                if not f.is_zero():
                    v = v - f * a[r][j]
                a[i][j] = v.exact_div(prev)
            a[i][col] = Poly()
        prev = p
        pivots.append(col)
        r += 1
        if r == R:
            break
    return a, pivots, prev


def _lin(c0, c1) -> Poly:
    return Poly((c0, c1))


@dataclass
class PatternAnalysis:
    """Generic behaviour of one active pattern along the parameter."""

    pattern: frozenset
    kind: str  # "empty-face" | "inconsistent" | "curve" | "family"
    rows: list = field(default_factory=list)  # parametric equality system, augmented
    det: Poly = field(default_factory=lambda: Poly.const(1))
    residual: Poly | None = None
    curve: tuple | None = None
    conditions: tuple = ()  # (RatFunc, strict)

    def candidate_polys(self) -> list[Poly]:
        out = []
        if self.kind in ("inconsistent", "curve") and self.det.degree >= 1:
            out.append(self.det)
        if self.residual is not None and self.residual.degree >= 1:
            out.append(self.residual)
        for f, _ in self.conditions:
            if f.num.degree >= 1:
                out.append(f.num)
        return out

    def evaluate_system(self, t) -> list[list]:
        return [[p(t) for p in row] for row in self.rows]

    def is_critical_at(self, root, n: int) -> bool:
        t = root_value(root)
        if self.kind == "inconsistent":
            hits = self.det(t) == 0 or (self.residual is not None and self.residual(t) == 0)
            if not hits:
                return False
            red, piv = rref(self.evaluate_system(t))
            return n not in piv
        if self.kind == "curve":
            if any(f.num(t) == 0 for f, _ in self.conditions):
                return True
            if self.det(t) != 0:
                return False
            _, piv = rref([row[:n] for row in self.evaluate_system(t)])
            return len(piv) < n
        return False


def normal_cone_rows(problem: AvviProblem, pattern) -> tuple[list[tuple], list[tuple]]:
    """H-representation (E, G) of cone{a_i : i in pattern} = {w : E w = 0, G w >= 0}."""
    n = problem.n
    act = sorted(pattern)
    one, zero = Fraction(1), Fraction(0)
    if not act:
        return [tuple(one if i == j else zero for j in range(n)) for i in range(n)], []
    A = problem.constraint.A
    k = len(act)
    dim = n + k
    eqs = []
    for j in range(n):
        row = [zero] * dim
        row[j] = one
        for idx, i in enumerate(act):
            row[n + idx] = -A.rows[i][j]
        eqs.append((tuple(row), zero))
    nonneg = []
    for idx in range(k):
        row = [zero] * dim
        row[n + idx] = one
        nonneg.append((tuple(row), zero))
    cone = fm_project(LinIneqSystem(dim, (), tuple(nonneg), tuple(eqs)), range(n))
    implicit = set(implicit_equalities(cone))
    E = [c for c, _ in cone.equalities] + [cone.nonstrict[i][0] for i in sorted(implicit)]
    G = [c for i, (c, _) in enumerate(cone.nonstrict) if i not in implicit]
    return E, G


def analyze_pattern(problem: AvviProblem, pattern) -> PatternAnalysis:
    pattern = frozenset(pattern)
    n = problem.n
    K = problem.constraint
    if K is not None and not is_feasible(pseudo_face(K, pattern))[0]:
        return PatternAnalysis(pattern, "empty-face")
    op1, op2 = problem.operators
    # M(t) = M2 + t (M1 - M2), q(t) likewise
    Mt = [
        [_lin(op2.M.rows[i][j], op1.M.rows[i][j] - op2.M.rows[i][j]) for j in range(n)]
        for i in range(n)
    ]
    qt = [_lin(op2.q[i], op1.q[i] - op2.q[i]) for i in range(n)]
    E, G = normal_cone_rows(problem, pattern)

    def cone_row(e):
        coeffs = [sum((Mt[k][j] * e[k] for k in range(n) if e[k] != 0), Poly()) for j in range(n)]
        rhs = -sum((qt[k] * e[k] for k in range(n) if e[k] != 0), Poly())
        return coeffs, rhs

    rows = []
    for e in E:
        coeffs, rhs = cone_row(e)
        rows.append(coeffs + [rhs])
    for i in sorted(pattern):
        rows.append([Poly.const(v) for v in K.A.rows[i]] + [Poly.const(K.b[i])])

    ech, pivots, det = _bareiss(rows, n)
    r = len(pivots)
    residuals = [ech[i][n] for i in range(r, len(ech)) if not ech[i][n].is_zero()]
    if residuals:
        g = residuals[0]
        for res in residuals[1:]:
            g = poly_gcd(g, res)
        return PatternAnalysis(pattern, "inconsistent", rows, det, g.monic())
    if r < n:
        return PatternAnalysis(pattern, "family", rows, det)

    x: list = [None] * n
    for k in range(n - 1, -1, -1):
        acc = RatFunc(ech[k][n])
        for j in range(k + 1, n):
            if not ech[k][j].is_zero():
                acc = acc - RatFunc(ech[k][j]) * x[j]
        x[k] = acc / RatFunc(ech[k][k])
    curve = tuple(x)

    conditions = []
    if K is not None:
        for i in range(K.p):
            if i in pattern:
                continue
            f = sum((RatFunc(Poly.const(a)) * xj for a, xj in zip(K.A.rows[i], curve) if a != 0), RatFunc(Poly()))
            conditions.append((f - K.b[i], True))
    if G:
        Fx = [
            sum((RatFunc(Mt[k][j]) * curve[j] for j in range(n) if not Mt[k][j].is_zero()), RatFunc(Poly()))
            + RatFunc(qt[k])
            for k in range(n)
        ]
        for g in G:
            f = sum((Fx[k] * g[k] for k in range(n) if g[k] != 0), RatFunc(Poly()))
            conditions.append((f, False))
    return PatternAnalysis(pattern, "curve", rows, det, None, curve, tuple(conditions))


@dataclass(frozen=True, eq=False)
class RationalCurve:
    coords: tuple  # RatFunc per coordinate, gcd-reduced
    domain: IntervalCell

    def __call__(self, t) -> tuple:
        return tuple(c(t) for c in self.coords)


def limit_at(curve: RationalCurve, endpoint):
    """Limit of the curve at a finite endpoint of its domain; ``None`` if it diverges."""
    dom = curve.domain
    if not (same_root(endpoint, dom.lo) or same_root(endpoint, dom.hi)):
        raise ValueError("not an endpoint of the curve's domain")
    t = root_value(endpoint)
    out = []
    for c in curve.coords:
        d = c.den(t)
        if d == 0:
            return None
        out.append(c.num(t) / d)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class SolutionPiece:
    id: int
    cell_index: int
    cell: object
    pattern: frozenset
    curve: RationalCurve | None = None
    fixed: PatternPiece | None = None

    @property
    def is_curve(self) -> bool:
        return self.curve is not None

    def witness(self) -> tuple:
        if self.curve is not None:
            return self.curve(self.cell.sample)
        return self.fixed.witness

    def closure_system(self) -> LinIneqSystem:
        return self.fixed.xset.relaxed()


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _holds(cond: RatFunc, strict: bool, t: Fraction) -> bool:
    s = _sign(cond.num(t)) * _sign(cond.den(t))
    return s > 0 if strict else s >= 0


class Sweep:
    """Pattern analyses, critical values and cells of a bicriteria problem."""

    def __init__(self, problem: AvviProblem, *, algebraic: bool = False):
        if problem.m != 2:
            raise Unsupported("the parameter sweep needs exactly two criteria")
        self.problem = problem
        self.algebraic = algebraic
        self.analyses = [analyze_pattern(problem, pat) for pat in all_patterns(problem.p)]
        for a in self.analyses:
            if a.kind == "family":
                raise Unsupported(
                    f"pattern {sorted(a.pattern)} has a positive-dimensional solution "
                    "family on open parameter cells"
                )

    @cached_property
    def criticals(self) -> list:
        n = self.problem.n
        combined = Poly.const(1)
        for a in self.analyses:
            for p in a.candidate_polys():
                q = squarefree_part(p)
                combined = combined * q.exact_div(poly_gcd(combined, q))
        if combined.degree < 1:
            return []
        out = []
        for root in isolate_roots(combined, 0, 1):
            if any(a.is_critical_at(root, n) for a in self.analyses):
                if isinstance(root, IntervalRoot) and not self.algebraic:
                    raise IrrationalCriticalValue(
                        f"irrational critical value {root} (enable algebraic mode)"
                    )
                out.append(root)
        return out

    def cells(self, mode: Mode) -> list:
        return decompose_cells(self.criticals, mode)

    def curve_pieces(self, cell: IntervalCell) -> list[tuple[frozenset, RationalCurve]]:
        t = cell.sample
        out = []
        for a in self.analyses:
            if a.kind != "curve":
                continue
            if all(_holds(f, strict, t) for f, strict in a.conditions):
                self._assert_sign_constant(a, cell)
                out.append((a.pattern, RationalCurve(a.curve, cell)))
        return out

    def _assert_sign_constant(self, a: PatternAnalysis, cell: IntervalCell):
        if not (isinstance(cell.lo, ExactRoot) and isinstance(cell.hi, ExactRoot)):
            return
        for f, _ in a.conditions:
            if f.num.degree < 1:
                continue
            for r in isolate_roots(f.num, cell.lo.value, cell.hi.value):
                if not (same_root(r, cell.lo) or same_root(r, cell.hi)):
                    raise AssertionError(f"sign condition {f} changes sign inside {cell}")

    def point_pieces(self, cell: PointCell) -> list[PatternPiece]:
        return point_pieces(self.problem, cell)

    def pieces(self, mode: Mode) -> tuple[list, list[SolutionPiece]]:
        cells = self.cells(mode)
        pieces: list[SolutionPiece] = []
        for k, cell in enumerate(cells):
            if isinstance(cell, IntervalCell):
                found = [(pat, curve, None) for pat, curve in self.curve_pieces(cell)]
            else:
                found = [(pp.pattern, None, pp) for pp in self.point_pieces(cell)]
            found.sort(key=lambda f: pattern_mask(f[0]))
            for pat, curve, fixed in found:
                pieces.append(SolutionPiece(len(pieces), k, cell, pat, curve, fixed))
        return cells, pieces


def critical_values(problem: AvviProblem, *, algebraic: bool = False) -> list:
    return Sweep(problem, algebraic=algebraic).criticals


def curve_pieces(problem: AvviProblem, cell: IntervalCell, *, algebraic: bool = False):
    return Sweep(problem, algebraic=algebraic).curve_pieces(cell)


def point_pieces(problem: AvviProblem, cell: PointCell) -> list[PatternPiece]:
    """Sol(AVI_c) at a critical value c, pattern by pattern."""
    op = scalarize(problem, Weight.bicriteria(cell.value))
    return list(solve_avi(op, problem.constraint))
