"""Heuristic component count by sampling weights and clustering solutions.

Every sampled weight is solved exactly; only the clustering uses floats.
The count is a plausibility check: it is right for the anti-diagonal
families with the default settings but carries no guarantee in general.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .avi import PatternPiece, solve_avi
from .fourier_motzkin import implicit_equalities
from .linalg import nullspace
from .model import AvviProblem, Unsupported, Weight, scalarize
from .roots import ExactRoot
from .sweep import Mode, critical_values

MAX_PIECE_SAMPLES = 4000


@dataclass(frozen=True)
class OracleResult:
    count: int
    clipped: bool  # some unbounded or large piece was cut at the box
    n_points: int
    n_weights: int
    heuristic: bool = True


def _line_range(piece: PatternPiece, base, d, clip: Fraction | None):
    """Interval of s with base + s d inside the closure of the piece and the box."""
    lo, hi = None, None

    def bound(coef, rhs):
        # coef * s >= rhs
        nonlocal lo, hi
        if coef > 0:
            v = rhs / coef
            lo = v if lo is None or v > lo else lo
        elif coef < 0:
            v = rhs / coef
            hi = v if hi is None or v < hi else hi
        elif rhs > 0:
            lo, hi = Fraction(1), Fraction(0)

    sys = piece.xset.relaxed()
    for c, rhs in sys.nonstrict:
        bound(sum(a * b for a, b in zip(c, d)), rhs - sum(a * b for a, b in zip(c, base)))
    if clip is not None:
        for i in range(len(d)):
            bound(d[i], -clip - base[i])
            bound(-d[i], -clip + base[i])
    return lo, hi


def _piece_points(piece: PatternPiece, clip: Fraction, step: Fraction) -> tuple[list, bool]:
    """Exact sample points of a piece inside the box, and whether it was cut."""
    w = piece.witness
    if piece.dimension == 0:
        return [w], False
    rows = [list(c) for c, _ in piece.xset.equalities]
    rows += [list(piece.xset.nonstrict[i][0]) for i in implicit_equalities(piece.xset)]
    basis = nullspace(rows, len(w)) if rows else [
        tuple(Fraction(int(i == j)) for j in range(len(w))) for i in range(len(w))
    ]
    pts = []
    if len(basis) == 1:
        d = basis[0]
        scale = max(abs(v) for v in d)
        d = tuple(v / scale for v in d)
        lo, hi = _line_range(piece, w, d, clip)
        full_lo, full_hi = _line_range(piece, w, d, None)
        clipped = full_lo is None or full_hi is None or lo > full_lo or hi < full_hi
        if lo > hi:
            return pts, clipped
        k = int((hi - lo) / step) + 1
        for i in range(min(k, MAX_PIECE_SAMPLES) + 1):
            s = lo + (hi - lo) * Fraction(i, max(k, 1))
            x = tuple(a + s * b for a, b in zip(w, d))
            if piece.contains(x):
                pts.append(x)
        return pts, clipped
    # higher-dimensional pieces: a capped grid in the hull coordinates
    per_axis = max(2, int(round(MAX_PIECE_SAMPLES ** (1 / len(basis)))))
    span = [2 * clip * Fraction(i, per_axis - 1) - clip for i in range(per_axis)]
    for coeffs in itertools.product(span, repeat=len(basis)):
        x = tuple(w[i] + sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(w)))
        if piece.contains(x) and all(abs(v) <= clip for v in x):
            pts.append(x)
    return pts + [w] if all(abs(v) <= clip for v in w) else pts, True


class _Sampler:
    def __init__(self, problem: AvviProblem, eps: float, clip: float):
        self.problem = problem
        self.eps = eps
        self.clip = Fraction(clip)
        self.step = Fraction(eps) / 2
        self.ops: dict[tuple, tuple] = {}  # weight -> (key, operator)
        self.cache: dict[tuple, np.ndarray] = {}
        self.far_cache: dict[tuple, bool] = {}
        self.refined: set[tuple] = set()
        self.clipped = False

    def _entry(self, xi: tuple) -> tuple:
        entry = self.ops.get(xi)
        if entry is None:
            op = scalarize(self.problem, Weight(xi))
            # integer key: hashing Fractions directly is slow
            vals = [v for row in op.M.rows for v in row] + list(op.q)
            entry = self.ops[xi] = (tuple((v.numerator, v.denominator) for v in vals), op)
        return entry

    def key(self, xi: tuple) -> tuple:
        return self._entry(xi)[0]

    def points(self, xi: tuple) -> np.ndarray:
        # weights with the same scalarized operator share one exact solve
        key, op = self._entry(xi)
        if key in self.cache:
            return self.cache[key]
        out = []
        for piece in solve_avi(op, self.problem.constraint):
            pts, cut = _piece_points(piece, self.clip, self.step)
            inside = [p for p in pts if all(abs(v) <= self.clip for v in p)]
            self.clipped = self.clipped or cut or len(inside) < len(pts)
            out.extend(inside)
        arr = np.array([[float(v) for v in p] for p in out], dtype=float).reshape(-1, self.problem.n)
        self.cache[key] = arr
        return arr

    def far(self, wa: tuple, wb: tuple) -> bool:
        """Hausdorff distance between the two clouds above eps/2."""
        key = (self.key(wa), self.key(wb))
        if key[0] == key[1]:
            return False
        if key not in self.far_cache:
            a, b = self.points(wa), self.points(wb)
            da, _ = cKDTree(b).query(a)
            db, _ = cKDTree(a).query(b)
            self.far_cache[key] = max(da.max(), db.max()) > self.eps / 2
        return self.far_cache[key]

    def refine(self, wa: tuple, wb: tuple, depth: int):
        # scalarization is linear, so a segment is determined by its end operators
        key = (self.key(wa), self.key(wb))
        if key in self.refined:
            return
        self.refined.add(key)
        pa, pb = self.points(wa), self.points(wb)
        if depth <= 0 or not len(pa) or not len(pb) or not self.far(wa, wb):
            return
        mid = tuple((a + b) / 2 for a, b in zip(wa, wb))
        if not len(self.points(mid)):
            return
        self.refine(wa, mid, depth - 1)
        self.refine(mid, wb, depth - 1)


def _simplex_grid(m: int, k: int, interior: bool) -> list[tuple]:
    out = []
    for parts in itertools.product(range(k + 1), repeat=m - 1):
        last = k - sum(parts)
        if last < 0:
            continue
        c = parts + (last,)
        if interior and min(c) == 0:
            continue
        out.append(tuple(Fraction(v, k) for v in c))
    return out


def _neighbours(xi: tuple, k: int) -> Iterable[tuple]:
    # lattice steps e_i - e_j with i < j (each unordered pair of points once)
    m = len(xi)
    unit = Fraction(1, k)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            nb = list(xi)
            nb[i] += unit
            nb[j] -= unit
            if nb[j] >= 0 and tuple(nb) > xi:
                yield tuple(nb)


def _rational_criticals(problem: AvviProblem) -> list:
    # irrational values cannot be sampled exactly and are left to the bisection
    try:
        roots = critical_values(problem, algebraic=True)
    except Unsupported:
        return []
    return [r.value for r in roots if isinstance(r, ExactRoot)]


def sampling_oracle(
    problem: AvviProblem,
    grid: int = 2000,
    eps: float = 0.05,
    clip: float = 10,
    *,
    mode: Mode = Mode.WEAK,
    extra_params: Sequence | None = None,
    simplex_divisions: int = 60,
    max_depth: int = 30,
) -> OracleResult:
    """Cluster count of sampled solutions.

    Bicriteria problems use ``grid`` uniform steps of xi_1 plus ``extra_params``;
    when those are not given, the rational critical values of the sweep are used.
    Larger m use a simplex lattice with ``simplex_divisions`` steps per edge.
    """
    if grid <= 0 or eps <= 0 or clip <= 0 or simplex_divisions <= 0:
        raise ValueError("grid, eps and clip must be positive")
    interior = mode is Mode.PARETO
    sampler = _Sampler(problem, eps, clip)
    m = problem.m
    if m == 1:
        weights = [(Fraction(1),)]
    elif m == 2:
        if extra_params is None:
            extra_params = _rational_criticals(problem)
        ts = {Fraction(i, grid) for i in range(grid + 1)}
        ts |= {Fraction(t) for t in extra_params}
        ts = sorted(t for t in ts if 0 <= t <= 1 and not (interior and t in (0, 1)))
        weights = [(t, 1 - t) for t in ts]
        for wa, wb in zip(weights, weights[1:]):
            sampler.refine(wa, wb, max_depth)
    else:
        weights = _simplex_grid(m, simplex_divisions, interior)
        allowed = set(weights)
        for xi in weights:
            for nb in _neighbours(xi, simplex_divisions):
                if nb in allowed:
                    sampler.refine(xi, nb, max_depth)
    for xi in weights:
        sampler.points(xi)
    clouds = [a for a in sampler.cache.values() if len(a)]
    if not clouds:
        return OracleResult(0, sampler.clipped, 0, len(sampler.ops))
    pts = np.unique(np.vstack(clouds), axis=0)
    pairs = cKDTree(pts).query_pairs(eps, output_type="ndarray")
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(pts), len(pts)))
    count, _ = connected_components(adj, directed=False)
    return OracleResult(count, sampler.clipped, len(pts), len(sampler.ops))
