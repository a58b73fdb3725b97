"""Dense exact linear algebra.

Everything here is written against the field operations only, so the same
code runs over :class:`~fractions.Fraction` and over
:class:`~avvi.algebraic.AlgebraicNumber` entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Poly, lagrange_interpolate


def to_q(v):
    """Coerce ints and ``"num/den"`` strings to Fraction; leave field elements alone."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return v


def vector(values: Iterable) -> tuple:
    return tuple(to_q(v) for v in values)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    acc = Fraction(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = acc + a * b
    return acc


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


class Matrix:
    """Immutable row-major matrix."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(to_q(v) for v in r) for r in rows)
        if self.rows:
            ncols = len(self.rows[0])
        elif ncols is None:
            ncols = 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix rows")
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls([[0] * c for _ in range(r)], c)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)) if self.rows else [], self.nrows)

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vadd(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vsub(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-v for v in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix([vscale(c, r) for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [other.col(j) for j in range(other.ncols)]
            return Matrix([[dot(r, c) for c in cols] for r in self.rows], other.ncols)
        if len(other) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, other) for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))


@dataclass(frozen=True)
class AffineSet:
    """``base + span(directions)`` with linearly independent directions."""

    base: tuple
    directions: tuple = ()

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def point(self, coeffs: Sequence) -> tuple:
        x = self.base
        for c, d in zip(coeffs, self.directions):
            x = vadd(x, vscale(c, d))
        return x


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a copy of ``rows`` and its pivot columns."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(rows: list[list]) -> int:
    return len(rref(rows)[1])


def solve_affine_system(M: Matrix, rhs: Sequence) -> AffineSet | None:
    """All solutions of ``M x = rhs``; ``None`` when the system is inconsistent."""
    if M.nrows != len(rhs):
        raise ValueError(f"{M.nrows} rows but rhs of length {len(rhs)}")
    n = M.ncols
    aug = [list(r) + [to_q(b)] for r, b in zip(M.rows, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    zero = Fraction(0)
    base = [zero] * n
    for i, c in enumerate(pivots):
        base[c] = red[i][n]
    free = [j for j in range(n) if j not in pivots]
    dirs = []
    for f in free:
        d = [zero] * n
        d[f] = Fraction(1)
        for i, c in enumerate(pivots):
            d[c] = -red[i][f]
        dirs.append(tuple(d))
    return AffineSet(tuple(base), tuple(dirs))


def nullspace(rows: list[list], n: int) -> list[tuple]:
    """Basis of {x : rows x = 0} for rows of width n."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    sol = solve_affine_system(Matrix(rows, n), [0] * len(rows))
    return list(sol.directions)


def determinant(M: Matrix):
    """Bareiss fraction-free elimination."""
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in M.rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def is_skew(M: Matrix) -> bool:
    if not M.is_square():
        raise ValueError("skew-symmetry test needs a square matrix")
    n = M.nrows
    return all(M.rows[i][j] == -M.rows[j][i] for i in range(n) for j in range(i, n))


def pfaffian(M: Matrix):
    """Pfaffian with pf([[0, a], [-a, 0]]) = a, by skew-symmetric elimination.

    Each step pairs row 0 with a row holding a nonzero entry, factors that
    entry out and recurses on the skew-symmetric Schur-type complement.
    """
    if not M.is_square():
        raise ValueError("pfaffian of a non-square matrix")
    if M.nrows % 2:
        raise ValueError("pfaffian needs even dimension")
    if not is_skew(M):
        raise ValueError("pfaffian needs a skew-symmetric matrix")
    a = [list(r) for r in M.rows]
    result = Fraction(1)
    while a:
        n = len(a)
        piv = next((j for j in range(1, n) if a[0][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != 1:
            # simultaneous row/column swap flips the sign
            a[1], a[piv] = a[piv], a[1]
            for r in a:
                r[1], r[piv] = r[piv], r[1]
            result = -result
        p = a[0][1]
        result = result * p
        rest = range(2, n)
        # Schur complement D + (c b^T - b c^T)/p, with b = row 0 and c = row 1 on rest
        a = [
            [a[i][j] + (a[1][i] * a[0][j] - a[0][i] * a[1][j]) / p for j in rest]
            for i in rest
        ]
    return result


def combine(M1: Matrix, M2: Matrix, t) -> Matrix:
    """``t*M1 + (1 - t)*M2``."""
    if M1.shape != M2.shape:
        raise ValueError("shape mismatch")
    s = 1 - t
    return Matrix(
        [[t * x + s * y for x, y in zip(r1, r2)] for r1, r2 in zip(M1.rows, M2.rows)], M1.ncols
    )


def interpolate_parametric_det(M1: Matrix, M2: Matrix) -> Poly:
    """Coefficients of ``t -> det(t*M1 + (1 - t)*M2)`` via n+1 evaluations."""
    if M1.shape != M2.shape or not M1.is_square():
        raise ValueError("need square matrices of equal dimension")
    nodes = [Fraction(k) for k in range(M1.nrows + 1)]
    return lagrange_interpolate(nodes, [determinant(combine(M1, M2, t)) for t in nodes])


def interpolate_parametric_pf(M1: Matrix, M2: Matrix) -> Poly:
    """Polynomial ``pf(t)`` with ``pf(t)**2 = det(t*M1 + (1 - t)*M2)``."""
    if M1.shape != M2.shape or not M1.is_square():
        raise ValueError("need square matrices of equal dimension")
    if M1.nrows % 2:
        raise ValueError("pfaffian needs even dimension")
    if not (is_skew(M1) and is_skew(M2)):
        raise ValueError("pfaffian needs skew-symmetric matrices")
    nodes = [Fraction(k) for k in range(M1.nrows // 2 + 1)]
    return lagrange_interpolate(nodes, [pfaffian(combine(M1, M2, t)) for t in nodes])
