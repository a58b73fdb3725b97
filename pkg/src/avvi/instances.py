"""Instance families with known component counts, lifting transforms and bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .linalg import AffineSet, Matrix
from .model import AffineOperator, AvviProblem, Polyhedron
from .poly import Poly, RatFunc

MAX_FAMILY_N = 24


def _check_family(n: int, p: int, max_n: int = MAX_FAMILY_N):
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    if not 0 <= p <= n // 2:
        raise ValueError(f"p must lie in [0, {n // 2}]")
    if n > max_n:
        raise ValueError(f"n = {n} exceeds the generator cap {max_n}")


def family_matrices(n: int) -> tuple[Matrix, Matrix]:
    """Anti-diagonal skew matrices: M1 reads (1..1, -1..-1), M2 reads (-1..-s, s..1)."""
    s = n // 2
    M1 = [[0] * n for _ in range(n)]
    M2 = [[0] * n for _ in range(n)]
    for i in range(n):  # 0-based row i holds its entry in column n-1-i
        j = n - 1 - i
        if i < s:
            M1[i][j] = 1
            M2[i][j] = -(i + 1)
        else:
            M1[i][j] = -1
            M2[i][j] = n - i
    return Matrix(M1), Matrix(M2)


def family_constraint(n: int, p: int) -> Polyhedron | None:
    """Rows -x_k - x_{n+1-k} >= -1 for k = 1..p (1-based)."""
    if p == 0:
        return None
    A = []
    for k in range(p):
        row = [0] * n
        row[k] = -1
        row[n - 1 - k] = -1
        A.append(row)
    return Polyhedron.build(A, [-1] * p)


def gen_family(n: int, p: int = 0, *, max_n: int = MAX_FAMILY_N) -> AvviProblem:
    """Bicriteria skew-symmetric instance whose solution sets have n/2 + p + 1 components."""
    _check_family(n, p, max_n)
    M1, M2 = family_matrices(n)
    q = tuple(Fraction(-1) for _ in range(n))
    return AvviProblem((AffineOperator(M1, q), AffineOperator(M2, q)), family_constraint(n, p))


def _u(n: int, j: int) -> tuple:
    """u_j = e_j - e_{n+1-j}, with 1-based j."""
    v = [Fraction(0)] * n
    v[j - 1] = Fraction(1)
    v[n - j] = Fraction(-1)
    return tuple(v)


@dataclass(frozen=True)
class GroundTruth:
    n: int
    p: int
    s: int
    expected_chi: int
    criticals: tuple
    curve: tuple  # RatFunc per coordinate, valid off the criticals
    lines: tuple  # AffineSet per k = 1..p
    g0: tuple
    g1: tuple

    def curve_at(self, t) -> tuple:
        return tuple(c(Fraction(t)) for c in self.curve)


def ground_truth(n: int, p: int = 0, *, max_n: int = MAX_FAMILY_N) -> GroundTruth:
    _check_family(n, p, max_n)
    s = n // 2
    criticals = tuple(Fraction(k, k + 1) for k in range(1, s + 1))
    coords: list = [None] * n
    for i in range(1, s + 1):
        f = RatFunc(Poly.const(1), Poly((i, -(i + 1))))  # 1 / (i - (i+1) t)
        coords[i - 1] = f
        coords[n - i] = -f
    lines = []
    for k in range(1, p + 1):
        xk = criticals[k - 1]
        base = [Fraction(0)] * n
        base[n - k] = Fraction(1)  # e_{2s+1-k}
        for j in range(1, s + 1):
            if j == k:
                continue
            beta = 1 / (j - (j + 1) * xk)
            base = [b + beta * u for b, u in zip(base, _u(n, j))]
        lines.append(AffineSet(tuple(base), (_u(n, k),)))
    g0 = tuple(c(Fraction(0)) for c in coords)
    g1 = tuple(c(Fraction(1)) for c in coords)
    return GroundTruth(n, p, s, s + p + 1, criticals, tuple(coords), tuple(lines), g0, g1)


def lift_variable(problem: AvviProblem) -> AvviProblem:
    """Add a variable pinned to zero by the rows x_{n+1} >= 0 and -x_{n+1} >= 0."""
    n = problem.n
    ops = []
    for op in problem.operators:
        M = [list(r) + [0] for r in op.M.rows] + [[0] * (n + 1)]
        ops.append(AffineOperator(Matrix(M), tuple(op.q) + (Fraction(0),)))
    rows, rhs = [], []
    if problem.constraint is not None:
        rows = [list(r) + [0] for r in problem.constraint.A.rows]
        rhs = list(problem.constraint.b)
    rows.append([0] * n + [1])
    rows.append([0] * n + [-1])
    rhs += [0, 0]
    return AvviProblem(tuple(ops), Polyhedron.build(rows, rhs, n + 1))


def lift_criterion(problem: AvviProblem) -> AvviProblem:
    """Append a duplicate of the last operator."""
    return AvviProblem(problem.operators + (problem.operators[-1],), problem.constraint)


class BoundKind(enum.Enum):
    GENERAL_UPPER = "general-upper"
    SKEW_BICRITERIA_UPPER = "skew-bicriteria-upper"
    LOWER_MONOTONE = "lower-monotone"


def bounds(m: int, n: int, p: int, kind: BoundKind) -> int | None:
    """Bound value, or ``None`` when the hypotheses behind it fail."""
    if m < 1 or n < 1 or p < 0:
        return None
    if kind is BoundKind.GENERAL_UPPER:
        return 2 * 3 ** (2 * m + 2 * n + 3 * p + 1)
    if kind is BoundKind.SKEW_BICRITERIA_UPPER:
        if m == 2 and p == 0 and n >= 2 and n % 2 == 0:
            return n + 1
        return None
    if kind is BoundKind.LOWER_MONOTONE:
        if m >= 2 and n >= 2 and 0 <= p <= n // 2:
            return n // 2 + p + 1
        return None
    raise ValueError(f"unknown bound kind {kind!r}")
