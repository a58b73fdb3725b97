"""Exact arithmetic in Q(r) for an isolated irrational real root r.

Elements are polynomials in r reduced modulo a square-free defining
polynomial ``f``.  Zero tests split ``f`` along gcds (dynamic evaluation),
so ``f`` shrinks towards the minimal polynomial as the computation learns
about r; signs of nonzero elements come from refining the isolating interval
until the element has no root left in it.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, poly_gcd, poly_xgcd, squarefree_part
from .roots import _bisect_step, sturm_count, sturm_sequence


class RootField:
    """Arithmetic context for one real root; shared by all its elements."""

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction):
        self.poly = poly.monic()
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._seq = sturm_sequence(self.poly)
        if self.poly(self.lo) == 0 or self.poly(self.hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")
        if sturm_count(self._seq, self.lo, self.hi) != 1:
            raise ValueError("interval does not isolate exactly one root")

    def __repr__(self):
        return f"RootField({self.poly}, ({self.lo}, {self.hi}))"

    def _set_poly(self, f: Poly):
        self.poly = f.monic()
        self._seq = sturm_sequence(self.poly)

    def element(self, p) -> "AlgebraicNumber":
        if not isinstance(p, Poly):
            p = Poly.const(p)
        return AlgebraicNumber(self, p)

    def generator(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, Poly.x())

    def _refine(self):
        self.lo, self.hi = _bisect_step(self.poly, self._seq, self.lo, self.hi)

    def is_zero(self, p: Poly) -> bool:
        p = p % self.poly
        if p.is_zero():
            return True
        g = poly_gcd(p, self.poly)
        if g.degree >= 1:
            gs = sturm_sequence(g)
            if g(self.lo) != 0 and g(self.hi) != 0 and sturm_count(gs, self.lo, self.hi) == 1:
                self._set_poly(g)
                return True
            self._set_poly(self.poly.exact_div(g))
        return False

    def sign(self, p: Poly) -> int:
        if self.is_zero(p):
            return 0
        p = p % self.poly
        q = squarefree_part(p)
        qs = sturm_sequence(q)
        while True:
            if q(self.lo) != 0 and q(self.hi) != 0 and sturm_count(qs, self.lo, self.hi) == 0:
                v = p(self.lo)
                return 1 if v > 0 else -1
            self._refine()

    def inverse(self, p: Poly) -> Poly:
        if self.is_zero(p):
            raise ZeroDivisionError("division by zero in algebraic number field")
        # is_zero left self.poly coprime to p
        g, s, _ = poly_xgcd(p % self.poly, self.poly)
        if g != Poly.const(1):
            raise ArithmeticError("element not invertible modulo defining polynomial")
        return s % self.poly

    def approx(self, p: Poly) -> float:
        while self.hi - self.lo > Fraction(1, 2**50):
            self._refine()
        return float(p((self.lo + self.hi) / 2))


class AlgebraicNumber:
    """Element of Q(r); supports field operations and exact comparisons."""

    __slots__ = ("field", "poly")
    __hash__ = None

    def __init__(self, field: RootField, poly: Poly):
        self.field = field
        self.poly = poly % field.poly if poly.degree >= field.poly.degree else poly

    def _lift(self, other) -> Poly:
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field:
                raise ValueError("mixing elements of different algebraic fields")
            return other.poly
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, self.poly + o)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, -self.poly)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, self.poly - o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, o - self.poly)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, self.poly * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, self.poly * self.field.inverse(o))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, o * self.field.inverse(self.poly))

    def sign(self) -> int:
        return self.field.sign(self.poly)

    def _cmp(self, other) -> int:
        o = self._lift(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare AlgebraicNumber with {type(other).__name__}")
        return self.field.sign(self.poly - o)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.sign() != 0

    def __float__(self):
        return self.field.approx(self.poly)

    def __repr__(self):
        return f"AlgebraicNumber({self.poly} at ~{float(self):.12g})"

    def __str__(self):
        return f"~{float(self):.12g}"
