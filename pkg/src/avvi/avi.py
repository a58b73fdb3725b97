"""Exact solution of a single affine variational inequality over a polyhedron.

Sol(AVI) is assembled pseudo-face by pseudo-face: on F_alpha the KKT system
``M x - A^T lam + q = 0, lam >= 0, lam_i = 0 off alpha`` is linear, and the
multipliers are projected away by Fourier-Motzkin elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fourier_motzkin import LinIneqSystem, affine_hull_dimension, fm_project, is_feasible
from .linalg import AffineSet, dot, solve_affine_system
from .model import (
    AffineOperator,
    AvviProblem,
    Polyhedron,
    active_pattern_of,
    all_patterns,
    pattern_mask,
)

MAX_CONSTRAINTS = 16


@dataclass(frozen=True)
class PatternPiece:
    """Sol(AVI) intersected with one pseudo-face, as a system over x."""

    pattern: frozenset
    xset: LinIneqSystem
    dimension: int
    witness: tuple

    def contains(self, x: Sequence) -> bool:
        return self.xset.contains(x)


@dataclass(frozen=True)
class AviSolutionSet:
    pieces: tuple = ()

    def is_empty(self) -> bool:
        return not self.pieces

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def contains(self, x: Sequence) -> bool:
        return any(p.contains(x) for p in self.pieces)


def solve_unconstrained(op: AffineOperator) -> AffineSet | None:
    """{x : M x + q = 0}, or ``None`` when empty."""
    return solve_affine_system(op.M, [-v for v in op.q])


def _unconstrained_piece(op: AffineOperator) -> PatternPiece | None:
    sol = solve_unconstrained(op)
    if sol is None:
        return None
    eqs = tuple((row, -qi) for row, qi in zip(op.M.rows, op.q))
    return PatternPiece(frozenset(), LinIneqSystem(op.n, (), (), eqs), sol.dimension, sol.base)


def kkt_system(op: AffineOperator, K: Polyhedron, pattern) -> LinIneqSystem:
    """The KKT conditions on F_pattern in the variables (x, lam_pattern)."""
    n = op.n
    act = sorted(pattern)
    dim = n + len(act)
    zero = Fraction(0)
    eqs, strict, nonstrict = [], [], []
    for k in range(n):
        row = list(op.M.rows[k]) + [-K.A.rows[i][k] for i in act]
        eqs.append((tuple(row), -op.q[k]))
    pad = (zero,) * len(act)
    for i in range(K.p):
        row = tuple(K.A.rows[i]) + pad
        (eqs if i in pattern else strict).append((row, K.b[i]))
    for k in range(len(act)):
        e = [zero] * dim
        e[n + k] = Fraction(1)
        nonstrict.append((tuple(e), zero))
    return LinIneqSystem(dim, tuple(strict), tuple(nonstrict), tuple(eqs))


def solve_pattern(op: AffineOperator, K: Polyhedron, pattern) -> PatternPiece | None:
    """Sol(AVI) on the pseudo-face F_pattern, or ``None`` when empty."""
    if op.n != K.n:
        raise ValueError("operator and constraint dimensions differ")
    pattern = frozenset(pattern)
    if any(i < 0 or i >= K.p for i in pattern):
        raise ValueError("pattern index out of range")
    xset = fm_project(kkt_system(op, K, pattern), range(op.n))
    ok, witness = is_feasible(xset)
    if not ok:
        return None
    return PatternPiece(pattern, xset, affine_hull_dimension(xset), witness)


def solve_avi(op: AffineOperator, constraint: Polyhedron | None) -> AviSolutionSet:
    """All nonempty pattern pieces, in bitmask order of the pattern."""
    if constraint is None:
        piece = _unconstrained_piece(op)
        return AviSolutionSet(() if piece is None else (piece,))
    if constraint.p > MAX_CONSTRAINTS:
        raise ValueError(f"pattern enumeration refuses p > {MAX_CONSTRAINTS}")
    pieces = []
    for pattern in all_patterns(constraint.p):
        piece = solve_pattern(op, constraint, pattern)
        if piece is not None:
            pieces.append(piece)
    pieces.sort(key=lambda pc: pattern_mask(pc.pattern))
    return AviSolutionSet(tuple(pieces))


def is_vi_solution(op: AffineOperator, constraint: Polyhedron | None, x: Sequence) -> bool:
    """Membership in Sol(AVI) through the multiplier characterisation."""
    if len(x) != op.n:
        raise ValueError("dimension mismatch")
    Fx = op(x)
    if constraint is None:
        return all(v == 0 for v in Fx)
    act = active_pattern_of(constraint, x)
    if act is None:
        return False
    act = sorted(act)
    # sum_{i in act} lam_i a_i = F(x), lam >= 0
    eqs = tuple((tuple(constraint.A.rows[i][k] for i in act), Fx[k]) for k in range(op.n))
    zero = Fraction(0)
    nonneg = tuple(
        (tuple(Fraction(int(i == j)) for j in range(len(act))), zero) for i in range(len(act))
    )
    return is_feasible(LinIneqSystem(len(act), (), nonneg, eqs))[0]


def _criterion_rows(problem: AvviProblem, x: Sequence):
    # <F_i(x), y - x> < 0  <=>  <-F_i(x), y> > -<F_i(x), x>
    rows = []
    for op in problem.operators:
        f = op(x)
        rows.append((tuple(-v for v in f), -dot(f, x)))
    return rows


def _k_rows(problem: AvviProblem) -> tuple:
    K = problem.constraint
    if K is None:
        return ()
    return tuple(zip(K.A.rows, K.b))


def _in_k(problem: AvviProblem, x: Sequence) -> bool:
    if len(x) != problem.n:
        raise ValueError("dimension mismatch")
    return problem.constraint is None or problem.constraint.contains(x)


def is_weak_pareto(problem: AvviProblem, x: Sequence) -> bool:
    """No y in K makes every criterion <F_i(x), y - x> strictly negative."""
    if not _in_k(problem, x):
        return False
    sys = LinIneqSystem(problem.n, tuple(_criterion_rows(problem, x)), _k_rows(problem), ())
    return not is_feasible(sys)[0]


def is_pareto(problem: AvviProblem, x: Sequence) -> bool:
    """No y in K makes all criteria nonpositive with at least one negative."""
    if not _in_k(problem, x):
        return False
    rows = _criterion_rows(problem, x)
    k_rows = _k_rows(problem)
    for i, strict_row in enumerate(rows):
        others = tuple(r for j, r in enumerate(rows) if j != i)
        sys = LinIneqSystem(problem.n, (strict_row,), k_rows + others, ())
        if is_feasible(sys)[0]:
            return False
    return True
