"""Affine vector variational inequalities: data model and structural predicates.

Constraint rows and active patterns use 0-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fourier_motzkin import LinIneqSystem
from .linalg import Matrix, dot, interpolate_parametric_det, is_skew, vector

__all__ = [
    "Polyhedron",
    "AffineOperator",
    "AvviProblem",
    "Weight",
    "Unsupported",
    "is_skew",
    "is_psd",
    "is_monotone",
    "is_skew_problem",
    "is_nondegenerate",
    "scalarize",
    "active_pattern_of",
    "pseudo_face",
    "pattern_mask",
    "all_patterns",
]


class Unsupported(Exception):
    """The requested analysis is outside what the exact machinery handles."""


@dataclass(frozen=True)
class Polyhedron:
    """K = {x : A x >= b}."""

    A: Matrix
    b: tuple

    def __post_init__(self):
        if self.A.nrows != len(self.b):
            raise ValueError(f"A has {self.A.nrows} rows but b has length {len(self.b)}")

    @classmethod
    def build(cls, A, b, n: int | None = None) -> "Polyhedron":
        return cls(Matrix(A, n), vector(b))

    @property
    def p(self) -> int:
        return self.A.nrows

    @property
    def n(self) -> int:
        return self.A.ncols

    def row(self, i: int) -> tuple:
        return self.A.rows[i]

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) >= bi for a, bi in zip(self.A.rows, self.b))


@dataclass(frozen=True)
class AffineOperator:
    """F(x) = M x + q."""

    M: Matrix
    q: tuple

    def __post_init__(self):
        if not self.M.is_square():
            raise ValueError("operator matrix must be square")
        if len(self.q) != self.M.nrows:
            raise ValueError("q length does not match M")

    @classmethod
    def build(cls, M, q) -> "AffineOperator":
        return cls(Matrix(M), vector(q))

    @property
    def n(self) -> int:
        return self.M.nrows

    def __call__(self, x: Sequence) -> tuple:
        return tuple(v + qi for v, qi in zip(self.M @ tuple(x), self.q))


@dataclass(frozen=True)
class AvviProblem:
    """m affine operators over a polyhedron; ``constraint=None`` means unconstrained."""

    operators: tuple
    constraint: Polyhedron | None = None

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(self.operators))
        if not self.operators:
            raise ValueError("need at least one operator")
        n = self.operators[0].n
        if any(op.n != n for op in self.operators):
            raise ValueError("operators disagree on the dimension")
        if self.constraint is not None and self.constraint.n != n:
            raise ValueError("constraint has the wrong number of columns")

    @property
    def n(self) -> int:
        return self.operators[0].n

    @property
    def m(self) -> int:
        return len(self.operators)

    @property
    def p(self) -> int:
        return 0 if self.constraint is None else self.constraint.p

    @property
    def unconstrained(self) -> bool:
        return self.constraint is None


@dataclass(frozen=True)
class Weight:
    """Point of the simplex Delta_m."""

    xi: tuple

    def __post_init__(self):
        xi = tuple(Fraction(v) if isinstance(v, (int, str)) else v for v in self.xi)
        object.__setattr__(self, "xi", xi)
        if any(v < 0 for v in xi):
            raise ValueError("weights must be nonnegative")
        if sum(xi, Fraction(0)) != 1:
            raise ValueError("weights must sum to 1")

    @classmethod
    def bicriteria(cls, t) -> "Weight":
        return cls((t, 1 - t))

    @property
    def interior(self) -> bool:
        return all(v > 0 for v in self.xi)

    def __len__(self):
        return len(self.xi)


def is_psd(M: Matrix) -> bool:
    """Positive semidefiniteness of the symmetric part, by pivoted LDL^T."""
    if not M.is_square():
        raise ValueError("PSD test needs a square matrix")
    n = M.nrows
    half = Fraction(1, 2)
    s = [[(M.rows[i][j] + M.rows[j][i]) * half for j in range(n)] for i in range(n)]
    while s:
        k = len(s)
        if any(s[i][i] < 0 for i in range(k)):
            return False
        piv = next((i for i in range(k) if s[i][i] > 0), None)
        if piv is None:
            # zero diagonal: PSD only if the whole block vanishes
            return all(v == 0 for row in s for v in row)
        d = s[piv][piv]
        col = [s[i][piv] for i in range(k)]
        s = [
            [s[i][j] - col[i] * col[j] / d for j in range(k) if j != piv]
            for i in range(k)
            if i != piv
        ]
    return True


def is_monotone(problem: AvviProblem) -> bool:
    return all(is_psd(op.M) for op in problem.operators)


def is_skew_problem(problem: AvviProblem) -> bool:
    return all(is_skew(op.M) for op in problem.operators)


def is_nondegenerate(problem: AvviProblem) -> bool:
    """Some simplex weight gives a nonsingular combined matrix (bicriteria only)."""
    if problem.m != 2:
        raise Unsupported("nondegeneracy is implemented for bicriteria problems only")
    M1, M2 = problem.operators[0].M, problem.operators[1].M
    return not interpolate_parametric_det(M1, M2).is_zero()


def scalarize(problem: AvviProblem, w: Weight | Sequence) -> AffineOperator:
    """The operator sum_i xi_i F_i."""
    xi = w.xi if isinstance(w, Weight) else tuple(w)
    if len(xi) != problem.m:
        raise ValueError(f"weight of length {len(xi)} for {problem.m} criteria")
    n = problem.n
    zero = Fraction(0)
    M = [[zero] * n for _ in range(n)]
    q = [zero] * n
    for c, op in zip(xi, problem.operators):
        if c == 0:
            continue
        for i in range(n):
            q[i] = q[i] + c * op.q[i]
            row = op.M.rows[i]
            for j in range(n):
                if row[j] != 0:
                    M[i][j] = M[i][j] + c * row[j]
    return AffineOperator(Matrix(M, n), tuple(q))


def active_pattern_of(K: Polyhedron | None, x: Sequence) -> frozenset | None:
    """Indices of tight rows if ``x`` lies in K, otherwise ``None``."""
    if K is None:
        return frozenset()
    if len(x) != K.n:
        raise ValueError("dimension mismatch")
    active = set()
    for i, (a, bi) in enumerate(zip(K.A.rows, K.b)):
        v = dot(a, x)
        if v < bi:
            return None
        if v == bi:
            active.add(i)
    return frozenset(active)


def pseudo_face(K: Polyhedron, pattern) -> LinIneqSystem:
    """F_alpha: rows in ``pattern`` tight, all others strictly satisfied."""
    eq, strict = [], []
    for i, (a, bi) in enumerate(zip(K.A.rows, K.b)):
        (eq if i in pattern else strict).append((a, bi))
    return LinIneqSystem(K.n, tuple(strict), (), tuple(eq))


def pattern_mask(pattern) -> int:
    return sum(1 << i for i in pattern)


def all_patterns(p: int) -> list[frozenset]:
    """Every subset of range(p), ordered by bitmask."""
    return [frozenset(i for i in range(p) if mask >> i & 1) for mask in range(1 << p)]
