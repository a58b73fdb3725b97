import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avvi.instances import family_matrices, gen_family
from avvi.linalg import Matrix
from avvi.model import (
    AffineOperator,
    AvviProblem,
    Polyhedron,
    Unsupported,
    Weight,
    active_pattern_of,
    all_patterns,
    is_monotone,
    is_nondegenerate,
    is_psd,
    pattern_mask,
    pseudo_face,
    scalarize,
)

from conftest import laplace_det, rational_matrices, rationals, skew_matrices

J = Matrix([[0, 1], [-1, 0]])
K1 = Polyhedron.build([[-1, -1]], [-1])


def op(M, q):
    return AffineOperator.build(M, q)


def principal_minor_psd(M: Matrix) -> bool:
    # symmetric S is PSD iff every principal minor is nonnegative
    n = M.nrows
    S = [[(M.rows[i][j] + M.rows[j][i]) / 2 for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if laplace_det([[S[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def test_psd_examples():
    assert is_psd(J)
    assert is_psd(Matrix.identity(3))
    assert not is_psd(Matrix([[-1]]))
    assert is_psd(Matrix([[1, 1], [1, 1]]))
    assert not is_psd(Matrix([[0, 1], [1, 0]]))


@given(skew_matrices())
def test_skew_is_psd(M):
    assert is_psd(M)


@given(st.integers(2, 3).flatmap(lambda n: rational_matrices(n=n, bound=3)))
def test_psd_matches_principal_minors(M):
    assert is_psd(M) == principal_minor_psd(M)


def test_psd_quadratic_form_spot_check():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 4)
        B = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        # B^T B plus a random skew part is PSD; perturb half of them
        M = [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if rng.random() < 0.5:
            M[0][0] -= rng.randint(1, 5)
        M = Matrix(M)
        psd = is_psd(M)
        for _ in range(1000 if psd else 0):
            v = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
            assert sum(v[i] * M.rows[i][j] * v[j] for i in range(n) for j in range(n)) >= 0
        assert psd == principal_minor_psd(M)


def test_monotone_examples():
    assert is_monotone(gen_family(4, 2))
    assert not is_monotone(AvviProblem((op([[-1]], [0]),)))
    assert not is_monotone(AvviProblem((op([[1]], [0]), op([[-1]], [0]))))


def test_nondegenerate_examples():
    assert is_nondegenerate(gen_family(4))
    Z = op([[0, 0], [0, 0]], [0, 0])
    assert not is_nondegenerate(AvviProblem((Z, Z)))
    Jop = op(J.rows, [0, 0])
    assert is_nondegenerate(AvviProblem((Jop, Jop)))
    with pytest.raises(Unsupported):
        is_nondegenerate(AvviProblem((Jop, Jop, Jop)))


def test_scalarize_examples():
    P = gen_family(2)
    mid = scalarize(P, Weight.bicriteria(Fraction(1, 2)))
    assert mid.M == Matrix.zeros(2, 2) and mid.q == (-1, -1)
    assert scalarize(P, Weight((1, 0))) == P.operators[0]
    end = scalarize(P, Weight((0, 1)))
    assert end.M == Matrix([[0, -1], [1, 0]]) and end.q == (-1, -1)
    with pytest.raises(ValueError):
        scalarize(P, Weight((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))))


@given(rationals(1, 8).filter(lambda v: 0 <= v <= 1), rationals(1, 8).filter(lambda v: 0 <= v <= 1))
def test_scalarize_is_affine(a, b):
    P = gen_family(4, 1)
    fa, fb = scalarize(P, Weight.bicriteria(a)), scalarize(P, Weight.bicriteria(b))
    fm = scalarize(P, Weight.bicriteria((a + b) / 2))
    assert fm.M == (fa.M + fb.M).scale(Fraction(1, 2))
    assert fm.q == tuple((x + y) / 2 for x, y in zip(fa.q, fb.q))


def test_weight_validation():
    with pytest.raises(ValueError):
        Weight((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        Weight((2, -1))
    assert Weight.bicriteria(Fraction(1, 3)).interior
    assert not Weight((1, 0)).interior


def test_active_pattern_examples():
    assert active_pattern_of(K1, (0, 0)) == frozenset()
    assert active_pattern_of(K1, (0, 1)) == frozenset({0})
    assert active_pattern_of(K1, (1, 1)) is None


@given(st.lists(rationals(3, 3), min_size=4, max_size=4))
def test_pseudo_faces_partition(x):
    K = gen_family(4, 2).constraint
    if not K.contains(x):
        return
    hits = [pat for pat in all_patterns(K.p) if pseudo_face(K, pat).contains(x)]
    assert hits == [active_pattern_of(K, x)]


def test_pattern_order():
    pats = all_patterns(3)
    assert [pattern_mask(p) for p in pats] == list(range(8))


def test_dimension_checks():
    with pytest.raises(ValueError):
        AvviProblem((op([[1]], [0]), op(J.rows, [0, 0])))
    with pytest.raises(ValueError):
        Polyhedron.build([[1, 2]], [1, 2])
    M1, _ = family_matrices(4)
    with pytest.raises(ValueError):
        AvviProblem((AffineOperator(M1, (0,) * 4),), K1)
