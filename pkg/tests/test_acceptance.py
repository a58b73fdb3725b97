"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that the terminal summary prints at the end
of the run. Runtime budgets are part of the criteria where one is stated.
"""

import functools
import random
import time
from fractions import Fraction

from avvi.avi import is_pareto, is_vi_solution, is_weak_pareto, solve_avi
from avvi.cli import random_skew, random_skew_problem
from avvi.components import build_piece_graph, count_components, endpoint_points
from avvi.instances import BoundKind, bounds, gen_family, ground_truth, lift_criterion, lift_variable
from avvi.linalg import determinant, dot, pfaffian
from avvi.model import AffineOperator, Polyhedron, Weight, scalarize
from avvi.oracle import sampling_oracle
from avvi.sweep import IntervalCell, Mode, Sweep, ZERO, ONE, critical_values

from conftest import ACCEPTANCE, piece_samples

F = Fraction
UNCONSTRAINED = [(n, 0) for n in (2, 4, 6, 8)]
CONSTRAINED = [(n, p) for n in (2, 4, 6) for p in range(1, n // 2 + 1)]
ALL = UNCONSTRAINED + CONSTRAINED


def criterion(num, title, budget=None):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                secs = time.perf_counter() - t0
                assert budget is None or secs < budget, f"took {secs:.1f} s, budget {budget} s"
                ok = True
            finally:
                ACCEPTANCE[num] = (ok, time.perf_counter() - t0, title)
        return run
    return wrap


def chi(problem, mode, **kw):
    return count_components(build_piece_graph(problem, mode, **kw)).count


@criterion(1, "unconstrained family counts n/2 + 1", budget=5)
def test_family_counts():
    for n, p in UNCONSTRAINED:
        assert chi(gen_family(n), Mode.WEAK) == chi(gen_family(n), Mode.PARETO) == n // 2 + 1


@criterion(2, "constrained family counts n/2 + p + 1", budget=30)
def test_constrained_family_counts():
    for n, p in CONSTRAINED:
        P = gen_family(n, p)
        assert chi(P, Mode.WEAK) == chi(P, Mode.PARETO) == n // 2 + p + 1


def _curve_key(pc):
    return pc.pattern, pc.curve.coords


@criterion(3, "Pareto pieces are the weak pieces without g(0) and g(1)")
def test_pareto_weak_relationship():
    for n, p in ALL:
        P, gt = gen_family(n, p), ground_truth(n, p)
        sw = Sweep(P)
        wcells, weak = sw.pieces(Mode.WEAK)
        pcells, pareto = sw.pieces(Mode.PARETO)
        # the same critical values split both modes; only the outer ends differ
        assert len(wcells) == len(pcells)
        for a, b in zip(wcells, pcells):
            if isinstance(a, IntervalCell):
                assert (a.lo, a.hi) == (b.lo, b.hi)
                assert a.lo_closed == (a.lo == ZERO) and a.hi_closed == (a.hi == ONE)
                assert not b.lo_closed and not b.hi_closed
            else:
                assert a.value == b.value
        # identical symbolic curves and identical fixed pieces
        assert [_curve_key(pc) for pc in weak if pc.is_curve] == [_curve_key(pc) for pc in pareto if pc.is_curve]
        wfix = [pc for pc in weak if not pc.is_curve]
        pfix = [pc for pc in pareto if not pc.is_curve]
        assert [(pc.pattern, pc.cell.value) for pc in wfix] == [(pc.pattern, pc.cell.value) for pc in pfix]
        for a, b in zip(wfix, pfix):
            assert a.fixed.contains(b.witness()) and b.fixed.contains(a.witness())
        # the removed points are exactly the curve limits at 0 and 1
        assert sorted(endpoint_points(sw)) == sorted([gt.g0, gt.g1])
        for x in (gt.g0, gt.g1):
            assert is_weak_pareto(P, x) and not is_pareto(P, x)
            assert not any(pc.fixed.contains(x) for pc in pfix)


@criterion(4, "Pfaffian squared equals determinant", budget=5)
def test_cayley_identity():
    rng = random.Random(2024)
    for k in range(200):
        M = random_skew(rng, (2, 4, 6, 8)[k % 4])
        assert pfaffian(M) ** 2 == determinant(M)


@criterion(5, "critical values are k/(k+1)")
def test_critical_values():
    for n, p in ALL:
        assert [r.value for r in critical_values(gen_family(n, p))] == [F(k, k + 1) for k in range(1, n // 2 + 1)]


@criterion(6, "random skew instances respect n + 1 and the general bound", budget=60)
def test_upper_bound_conformance():
    rng = random.Random(31)
    for k in range(50):
        n = (2, 4, 6, 8)[k % 4]
        P = random_skew_problem(rng, n)
        c = chi(P, Mode.WEAK, algebraic=True)
        assert 1 <= c <= bounds(2, n, 0, BoundKind.SKEW_BICRITERIA_UPPER)
        assert c <= bounds(2, n, 0, BoundKind.GENERAL_UPPER)


def _weights(n):
    crit = [F(k, k + 1) for k in range(1, n // 2 + 1)]
    fill = [F(j, 23) for j in range(1, 23)]
    return ([F(0), F(1)] + crit + fill)[:20]


@criterion(7, "scalarized witnesses are Pareto inside and weakly Pareto on the boundary")
def test_scalarization_properties():
    rng = random.Random(7)
    for n, p in ALL:
        P = gen_family(n, p)
        ws = _weights(n)
        assert len(set(ws)) == 20
        for t in ws:
            sol = solve_avi(scalarize(P, Weight.bicriteria(t)), P.constraint)
            for pc in sol:
                for x in piece_samples(pc, rng):
                    if 0 < t < 1:
                        assert is_pareto(P, x)
                    else:
                        assert is_weak_pareto(P, x)


def _monotone_instance(rng, n, p):
    rank = rng.randint(1, n - 1)
    B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rank)]
    S = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    M = [[sum(B[k][i] * B[k][j] for k in range(rank)) + S[i][j] - S[j][i] for j in range(n)] for i in range(n)]
    op = AffineOperator.build(M, [rng.randint(-3, 3) for _ in range(n)])
    K = Polyhedron.build([[rng.randint(-2, 2) for _ in range(n)] for _ in range(p)],
                         [rng.randint(-3, 1) for _ in range(p)], n)
    return op, K


@criterion(8, "midpoints of monotone solution pairs are solutions")
def test_convexity():
    rng = random.Random(8)
    pairs = 0
    while pairs < 100:
        op, K = _monotone_instance(rng, rng.randint(2, 4), rng.randint(1, 3))
        pts = list({x for pc in solve_avi(op, K) for x in piece_samples(pc, rng)})
        if len(pts) < 2:
            continue
        for _ in range(5):
            a, b = rng.sample(pts, 2)
            assert is_vi_solution(op, K, tuple((u + v) / 2 for u, v in zip(a, b)))
            pairs += 1


@criterion(9, "curve samples lie at squared distance 1/2 from every constraint hyperplane")
def test_separation():
    rng = random.Random(9)
    for n, p in CONSTRAINED:
        P = gen_family(n, p)
        K = P.constraint
        cells, pieces = Sweep(P).pieces(Mode.WEAK)
        curves = [pc for pc in pieces if pc.is_curve]
        for k in range(20):
            pc = curves[k % len(curves)]
            lo, hi = pc.cell.lo.value, pc.cell.hi.value
            x = pc.curve(lo + (hi - lo) * F(rng.randint(1, 999), 1000))
            for c, d in zip(K.A.rows, K.b):
                assert (dot(c, x) - d) ** 2 / dot(c, c) == F(1, 2)


@criterion(10, "both lifts preserve the component count", budget=10)
def test_lifting():
    for n, p in [(2, 0), (4, 1)]:
        P = gen_family(n, p)
        for mode in Mode:
            assert chi(lift_variable(P), mode) == chi(P, mode) == n // 2 + p + 1
        assert sampling_oracle(lift_criterion(P)).count == n // 2 + p + 1


@criterion(11, "sampling oracle with defaults matches the structural count")
def test_oracle_agreement():
    for n, p in ALL:
        P = gen_family(n, p)
        assert sampling_oracle(P).count == chi(P, Mode.WEAK)
