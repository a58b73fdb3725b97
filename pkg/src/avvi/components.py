"""Exact connected components of bicriteria solution sets.

Pieces come from the sweep: one rational curve per (cell, pattern) on open
parameter intervals and one polyhedral piece per (critical value, pattern).
For a fixed point x the set of parameters t with x in Sol(AVI_t) is an
interval (the normal cone at x is fixed and M(t) x + q(t) is affine in t),
so pieces on non-adjacent cells never meet and only the adjacency cases
below need exact tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .avi import is_vi_solution
from .fourier_motzkin import is_feasible
from .model import AvviProblem, Weight, scalarize
from .poly import Poly, poly_gcd
from .roots import IntervalRoot, isolate_roots
from .sweep import (
    IntervalCell,
    Mode,
    ONE,
    PointCell,
    SolutionPiece,
    Sweep,
    ZERO,
    limit_at,
    root_value,
    same_root,
)


@dataclass
class PieceGraph:
    pieces: list
    edges: list  # sorted (i, j) pairs with i < j
    mode: Mode
    cells: list = field(default_factory=list)
    criticals: list = field(default_factory=list)


@dataclass
class ComponentReport:
    mode: Mode
    count: int
    components: list  # sorted lists of piece ids
    witnesses: list  # one point per component


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if a > b:
            a, b = b, a
        self.parent[b] = a
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


def _roots_inside(poly: Poly, cell: IntervalCell) -> list:
    """Roots of ``poly`` strictly inside the open cell."""
    lo = cell.lo.lo if isinstance(cell.lo, IntervalRoot) else cell.lo.value
    hi = cell.hi.hi if isinstance(cell.hi, IntervalRoot) else cell.hi.value
    out = []
    for r in isolate_roots(poly, lo, hi):
        if same_root(r, cell.lo) or same_root(r, cell.hi):
            continue
        t = root_value(r)
        if root_value(cell.lo) < t < root_value(cell.hi):
            out.append(r)
    return out


def curve_passes_through(piece: SolutionPiece, x0) -> bool:
    """Does the curve hit the rational point ``x0`` at some t inside its open cell?"""
    g = Poly()
    for c, v in zip(piece.curve.coords, x0):
        g = poly_gcd(g, c.num - c.den * v)
    if g.is_zero():
        return True
    if g.degree < 1:
        return False
    return bool(_roots_inside(g, piece.cell))


def build_piece_graph(problem: AvviProblem, mode: Mode = Mode.WEAK, *, algebraic: bool = False,
                      sweep: Sweep | None = None) -> PieceGraph:
    sw = sweep or Sweep(problem, algebraic=algebraic)
    cells, pieces = sw.pieces(mode)
    by_cell: dict[int, list[SolutionPiece]] = {}
    for pc in pieces:
        by_cell.setdefault(pc.cell_index, []).append(pc)
    edges: set[tuple[int, int]] = set()

    def link(a: SolutionPiece, b: SolutionPiece):
        edges.add((min(a.id, b.id), max(a.id, b.id)))

    K = problem.constraint
    for k, cell in enumerate(cells):
        here = by_cell.get(k, [])
        if isinstance(cell, PointCell):
            c = cell.value
            neighbours = [j for j in (k - 1, k + 1) if 0 <= j < len(cells)]
            limits: dict[int, list] = {}
            for j in neighbours:
                for cp in by_cell.get(j, []):
                    lim = limit_at(cp.curve, cell.root)
                    if lim is None:
                        continue
                    limits.setdefault(j, []).append((cp, lim))
                    # (a) bounded curve limit inside the closure of a point piece
                    for pp in here:
                        if pp.closure_system().contains(lim):
                            link(cp, pp)
            # (b) curves on both sides with a common limit that solves AVI_c
            if len(neighbours) == 2:
                op = scalarize(problem, Weight.bicriteria(c))
                for cl, xl in limits.get(k - 1, []):
                    for cr, xr in limits.get(k + 1, []):
                        if all(a == b for a, b in zip(xl, xr)) and is_vi_solution(op, K, xl):
                            link(cl, cr)
            # (c) point pieces at the same parameter with intersecting closures
            for i, a in enumerate(here):
                for b in here[i + 1:]:
                    if is_feasible(a.closure_system() & b.closure_system())[0]:
                        link(a, b)
        else:
            # (d) curves over the same cell: equal at the sample, or (at an
            # excluded endpoint 0 or 1) one curve's limit reached by another
            t = cell.sample
            for i, a in enumerate(here):
                for b in here[i + 1:]:
                    if a.curve(t) == b.curve(t):
                        link(a, b)
            open_ends = []
            if not cell.lo_closed and same_root(cell.lo, ZERO):
                open_ends.append(cell.lo)
            if not cell.hi_closed and same_root(cell.hi, ONE):
                open_ends.append(cell.hi)
            for end in open_ends:
                for a in here:
                    lim = limit_at(a.curve, end)
                    if lim is None:
                        continue
                    for b in here:
                        if b is not a and curve_passes_through(b, lim):
                            link(a, b)
    return PieceGraph(pieces, sorted(edges), mode, cells, list(sw.criticals))


def count_components(graph: PieceGraph) -> ComponentReport:
    uf = UnionFind(len(graph.pieces))
    for i, j in graph.edges:
        uf.union(i, j)
    groups = uf.groups() if graph.pieces else []
    witnesses = [graph.pieces[g[0]].witness() for g in groups]
    return ComponentReport(graph.mode, len(groups), groups, witnesses)


def component_count(problem: AvviProblem, mode: Mode = Mode.WEAK, *, algebraic: bool = False) -> int:
    return count_components(build_piece_graph(problem, mode, algebraic=algebraic)).count


def endpoint_points(sweep: Sweep) -> list[tuple]:
    """Weak solutions at t = 0 and t = 1 that the Pareto decomposition leaves out.

    Curves closed at an endpoint contribute their value there; point pieces at
    a critical value 0 or 1 contribute their witness.
    """
    cells, pieces = sweep.pieces(Mode.WEAK)
    out = []
    for pc in pieces:
        cell = pc.cell
        if isinstance(cell, PointCell):
            if same_root(cell.root, ZERO) or same_root(cell.root, ONE):
                out.append(pc.witness())
            continue
        if cell.lo_closed:
            out.append(pc.curve(cell.lo.value))
        if cell.hi_closed:
            out.append(pc.curve(cell.hi.value))
    return out
