from fractions import Fraction

import pytest

from avvi.avi import is_pareto, is_vi_solution, is_weak_pareto, solve_avi
from avvi.components import component_count
from avvi.instances import (
    BoundKind,
    family_matrices,
    gen_family,
    ground_truth,
    lift_criterion,
    lift_variable,
    bounds,
)
from avvi.linalg import dot
from avvi.model import (
    Weight,
    is_monotone,
    is_nondegenerate,
    is_skew_problem,
    scalarize,
)
from avvi.sweep import Mode, critical_values

F = Fraction


def test_gen_family_examples():
    P = gen_family(2)
    assert P.operators[0].M.rows == ((0, 1), (-1, 0))
    assert P.operators[1].M.rows == ((0, -1), (1, 0))
    assert P.operators[0].q == P.operators[1].q == (-1, -1)
    assert P.constraint is None
    K = gen_family(4, 1).constraint
    assert K.A.rows == ((-1, 0, 0, -1),) and K.b == (-1,)
    K = gen_family(4, 2).constraint
    assert K.A.rows == ((-1, 0, 0, -1), (0, -1, -1, 0)) and K.b == (-1, -1)


def test_family_anti_diagonals():
    M1, M2 = family_matrices(6)
    assert [M1[i, 5 - i] for i in range(6)] == [1, 1, 1, -1, -1, -1]
    assert [M2[i, 5 - i] for i in range(6)] == [-1, -2, -3, 3, 2, 1]


@pytest.mark.parametrize("n,p", [(3, 0), (0, 0), (4, 3), (4, -1)])
def test_gen_family_rejects(n, p):
    with pytest.raises(ValueError):
        gen_family(n, p)


def test_generator_cap():
    with pytest.raises(ValueError):
        gen_family(26)
    assert gen_family(26, max_n=26).n == 26


def test_family_properties_up_to_twelve():
    for n in range(2, 13, 2):
        for p in range(n // 2 + 1):
            P = gen_family(n, p)
            assert is_skew_problem(P) and is_monotone(P) and is_nondegenerate(P)


def test_ground_truth_examples():
    gt = ground_truth(4)
    assert gt.expected_chi == 3 and gt.criticals == (F(1, 2), F(2, 3))
    assert gt.g0 == (1, F(1, 2), F(-1, 2), -1)
    gt = ground_truth(2, 1)
    assert gt.expected_chi == 3
    (line,) = gt.lines
    assert line.base == (0, 1) and line.directions == ((1, -1),)
    gt = ground_truth(4, 2)
    assert gt.expected_chi == 5
    assert gt.lines[1].base == (-3, 0, 1, 3) and gt.lines[1].directions == ((0, 1, -1, 0),)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_ground_truth_criticals_match_sweep(n):
    for p in range(n // 2 + 1):
        gt = ground_truth(n, p)
        assert [r.value for r in critical_values(gen_family(n, p))] == list(gt.criticals)
        assert all(0 < a < b < 1 for a, b in zip(gt.criticals, gt.criticals[1:]))


@pytest.mark.parametrize("n,p", [(2, 1), (4, 1), (4, 2), (6, 3)])
def test_ground_truth_curve_and_lines_solve(n, p):
    P, gt = gen_family(n, p), ground_truth(n, p)
    for t in [F(1, 7), F(3, 5), F(9, 10)]:
        if t in gt.criticals:
            continue
        x = gt.curve_at(t)
        assert is_vi_solution(scalarize(P, Weight.bicriteria(t)), P.constraint, x)
    for k, line in enumerate(gt.lines):
        at = scalarize(P, Weight.bicriteria(gt.criticals[k]))
        for s in range(-4, 5):
            x = line.point([F(s, 2)])
            assert is_vi_solution(at, P.constraint, x)
            assert is_weak_pareto(P, x) and is_pareto(P, x)


@pytest.mark.parametrize("n,p", [(2, 1), (4, 1), (4, 2), (6, 3)])
def test_separation_from_constraint_hyperplanes(n, p):
    P, gt = gen_family(n, p), ground_truth(n, p)
    K = P.constraint
    for k in range(1, 21):
        t = F(k, 21)
        if t in gt.criticals:
            continue
        x = gt.curve_at(t)
        for i in range(K.p):
            c, d = K.A.rows[i], K.b[i]
            assert (dot(c, x) - d) ** 2 / dot(c, c) == F(1, 2)


def test_lift_variable():
    P = gen_family(2)
    Q = lift_variable(P)
    assert Q.n == 3 and Q.p == 2
    assert Q.operators[0].M.rows == ((0, 1, 0), (-1, 0, 0), (0, 0, 0))
    assert Q.operators[0].q == (-1, -1, 0)
    assert is_monotone(Q)
    assert component_count(Q, Mode.WEAK) == 2
    w = Weight.bicriteria(F(1, 3))
    lhs = solve_avi(scalarize(P, w), P.constraint)
    rhs = solve_avi(scalarize(Q, w), Q.constraint)
    assert [pc.witness + (0,) for pc in lhs] == [pc.witness for pc in rhs]
    assert all(pc.dimension == 0 for pc in rhs)


def test_lift_variable_keeps_rows():
    Q = lift_variable(gen_family(4, 1))
    assert Q.constraint.A.rows[0] == (-1, 0, 0, -1, 0) and Q.p == 3


def test_lift_criterion():
    P = gen_family(2)
    Q = lift_criterion(P)
    assert Q.m == 3 and Q.operators[2] == Q.operators[1] and is_monotone(Q)
    third = F(1, 3)
    (pc,) = solve_avi(scalarize(Q, Weight((third, third, third))), Q.constraint)
    assert is_vi_solution(scalarize(P, Weight((third, 2 * third))), P.constraint, pc.witness)


def test_bounds_examples():
    assert bounds(2, 6, 0, BoundKind.SKEW_BICRITERIA_UPPER) == 7
    assert bounds(2, 4, 0, BoundKind.SKEW_BICRITERIA_UPPER) == 5
    assert bounds(3, 5, 2, BoundKind.LOWER_MONOTONE) == 5
    assert bounds(2, 4, 0, BoundKind.LOWER_MONOTONE) == 3
    # the exponent is 2m + 2n + 3p + 1, so 2 * 3^13 = 3188646 belongs to (2, 4, 0)
    assert bounds(2, 2, 0, BoundKind.GENERAL_UPPER) == 2 * 3 ** 9 == 39366
    assert bounds(2, 4, 0, BoundKind.GENERAL_UPPER) == 2 * 3 ** 13 == 3188646
    assert bounds(1, 1, 1, BoundKind.GENERAL_UPPER) == 2 * 3 ** 8


@pytest.mark.parametrize(
    "m,n,p,kind",
    [
        (1, 4, 0, BoundKind.LOWER_MONOTONE),
        (2, 4, 3, BoundKind.LOWER_MONOTONE),
        (3, 4, 0, BoundKind.SKEW_BICRITERIA_UPPER),
        (2, 5, 0, BoundKind.SKEW_BICRITERIA_UPPER),
        (2, 4, 1, BoundKind.SKEW_BICRITERIA_UPPER),
        (0, 4, 0, BoundKind.GENERAL_UPPER),
    ],
)
def test_bounds_inapplicable(m, n, p, kind):
    assert bounds(m, n, p, kind) is None


@pytest.mark.parametrize("n,p", [(2, 0), (4, 0), (4, 2), (6, 1)])
def test_bounds_bracket_structural_count(n, p):
    chi = component_count(gen_family(n, p), Mode.WEAK)
    assert bounds(2, n, p, BoundKind.LOWER_MONOTONE) <= chi <= bounds(2, n, p, BoundKind.GENERAL_UPPER)
    upper = bounds(2, n, p, BoundKind.SKEW_BICRITERIA_UPPER)
    if upper is not None:
        assert chi <= upper
