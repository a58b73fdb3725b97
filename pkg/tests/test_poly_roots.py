from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avvi.poly import Poly, RatFunc, lagrange_interpolate, poly_gcd, poly_xgcd, squarefree_part, yun
from avvi.roots import ExactRoot, IntervalRoot, isolate_roots, sturm_count, sturm_sequence

from conftest import rationals

t = Poly.x()


def test_poly_arithmetic():
    p = (2 * t - 1) * (3 * t - 2)
    assert p == Poly((2, -7, 6))
    assert p(Fraction(1, 2)) == 0
    q, r = p.divmod(2 * t - 1)
    assert q == 3 * t - 2 and r.is_zero()
    assert Poly().degree < 0
    assert (t ** 3).derivative() == 3 * t ** 2


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (t ** 2 + 1).exact_div(t)


def test_gcd_and_squarefree():
    a = (t - 1) ** 2 * (t + 2)
    b = (t - 1) * (t - 3)
    assert poly_gcd(a, b) == t - 1
    assert squarefree_part(a) == ((t - 1) * (t + 2)).monic()
    assert yun(a) == [(t + 2, 1), (t - 1, 2)]


@given(st.lists(rationals(), min_size=1, max_size=4), st.lists(rationals(), min_size=1, max_size=4))
def test_xgcd_bezout(ca, cb):
    a, b = Poly(ca), Poly(cb)
    g, s, u = poly_xgcd(a, b)
    assert s * a + u * b == g
    if not g.is_zero():
        assert (a % g).is_zero() and (b % g).is_zero()


@given(st.lists(rationals(), min_size=1, max_size=5))
def test_interpolation_recovers_polynomial(coeffs):
    p = Poly(coeffs)
    nodes = [Fraction(k) for k in range(len(coeffs))]
    assert lagrange_interpolate(nodes, [p(x) for x in nodes]) == p


def test_ratfunc_is_reduced():
    f = RatFunc((t - 1) * (t + 1), 2 * (t - 1))
    assert f.num == Poly((Fraction(1, 2), Fraction(1, 2))) and f.den == Poly((1,))
    g = RatFunc(Poly.const(1), Poly((1, -2)))
    assert g(Fraction(1, 4)) == 2
    assert (g - g).is_zero()


def test_isolate_family_determinant():
    p = (2 * t - 1) ** 2 * (3 * t - 2) ** 2
    roots = isolate_roots(p, 0, 1)
    assert [(r.value, r.multiplicity) for r in roots] == [(Fraction(1, 2), 2), (Fraction(2, 3), 2)]
    assert all(isinstance(r, ExactRoot) for r in roots)


def test_isolate_constant_is_empty():
    assert isolate_roots(Poly.const(5), 0, 1) == []


def test_isolate_sqrt2():
    (r,) = isolate_roots(t ** 2 - 2, 0, 2)
    assert isinstance(r, IntervalRoot)
    assert r.hi - r.lo <= Fraction(1, 10**6)
    assert r.lo ** 2 < 2 < r.hi ** 2


def test_sturm_count_matches_known_roots():
    p = (t - Fraction(1, 3)) * (t - Fraction(1, 2)) * (t - 5)
    seq = sturm_sequence(p)
    assert sturm_count(seq, Fraction(0), Fraction(1)) == 2
    assert sturm_count(seq, Fraction(0), Fraction(6)) == 3


@given(st.lists(rationals(bound=4, max_den=5), min_size=1, max_size=5), st.lists(st.integers(1, 3), min_size=5, max_size=5))
def test_rational_roots_exact_with_multiplicity(roots, mults):
    p = Poly.const(1)
    expected = {}
    for r, m in zip(roots, mults):
        p = p * (t - r) ** m
        expected[r] = expected.get(r, 0) + m
    found = isolate_roots(p, -5, 5)
    assert all(isinstance(r, ExactRoot) for r in found)
    assert {r.value: r.multiplicity for r in found} == expected
    assert [r.value for r in found] == sorted(expected)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6))
def test_isolation_invariants(coeffs):
    p = Poly(coeffs)
    if p.degree < 1:
        return
    found = isolate_roots(p, -10, 10)
    # exact roots divide the polynomial with their multiplicities
    q = Poly.const(1)
    for r in found:
        if isinstance(r, ExactRoot):
            assert p(r.value) == 0
            q = q * (t - r.value) ** r.multiplicity
        else:
            assert r.poly(r.lo) * r.poly(r.hi) < 0
    assert (p % q).is_zero()
    # intervals are ordered and pairwise disjoint
    for a, b in zip(found, found[1:]):
        assert a.hi < b.lo or (a.hi == b.lo and not (isinstance(a, ExactRoot) and isinstance(b, ExactRoot)))
    assert len(found) == sturm_count(sturm_sequence(squarefree_part(p)), Fraction(-10), Fraction(10)) + sum(
        1 for e in (Fraction(-10), Fraction(10)) if p(e) == 0
    )
