"""Real root isolation: rational roots exactly, the rest by Sturm bisection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .poly import Poly, yun

DEFAULT_WIDTH = Fraction(1, 10**6)


def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(seq: list[Poly], x: Fraction) -> int:
    count = 0
    last = 0
    for p in seq:
        v = p(x)
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sturm_count(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct roots in the open interval (a, b); a and b must not be roots."""
    return _variations(seq, a) - _variations(seq, b)


@dataclass(frozen=True)
class ExactRoot:
    value: Fraction
    multiplicity: int = 1

    @property
    def lo(self) -> Fraction:
        return self.value

    @property
    def hi(self) -> Fraction:
        return self.value

    def approx(self) -> float:
        return float(self.value)

    def exact_value(self):
        return self.value

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, eq=False)
class IntervalRoot:
    """Irrational root of the square-free ``poly``, the only one in (lo, hi)."""

    lo: Fraction
    hi: Fraction
    multiplicity: int
    poly: Poly

    @cached_property
    def _seq(self):
        return sturm_sequence(self.poly)

    def refined(self, width: Fraction) -> "IntervalRoot":
        lo, hi = self.lo, self.hi
        while hi - lo > width:
            lo, hi = _bisect_step(self.poly, self._seq, lo, hi)
        return IntervalRoot(lo, hi, self.multiplicity, self.poly)

    @cached_property
    def field(self):
        from .algebraic import RootField

        return RootField(self.poly, self.lo, self.hi)

    def exact_value(self):
        """The root as an element of its own algebraic number field."""
        return self.field.generator()

    def approx(self) -> float:
        r = self.refined(Fraction(1, 2**60))
        return float((r.lo + r.hi) / 2)

    def __str__(self):
        return f"~{self.approx():.12g}"


def _bisect_step(f, seq, lo, hi):
    """Halve (lo, hi) keeping the unique root inside; split points avoid roots."""
    for k in range(2, 64):
        mid = lo + (hi - lo) / k if k > 2 else (lo + hi) / 2
        if f(mid) != 0:
            break
    if sturm_count(seq, lo, mid) == 1:
        return lo, mid
    return mid, hi


def _isolate_squarefree(f: Poly, lo: Fraction, hi: Fraction, width: Fraction):
    """Roots of square-free ``f`` in [lo, hi] as exact rationals or intervals."""
    seq = sturm_sequence(f)
    exact: list[Fraction] = []
    intervals: list[tuple[Fraction, Fraction]] = []
    for e in (lo, hi):
        if f(e) == 0 and e not in exact:
            exact.append(e)

    def separate(m):
        # pick delta so that m is the only root in [m - delta, m + delta]
        delta = (hi - lo) / 4 or Fraction(1)
        while True:
            a, b = m - delta, m + delta
            if f(a) != 0 and f(b) != 0 and sturm_count(seq, a, b) == 1:
                return a, b
            delta /= 2

    def open_ends(a, b):
        # shrink a closed-endpoint root off the ends of [a, b]
        if f(a) == 0:
            a = separate(a)[1]
        if f(b) == 0:
            b = separate(b)[0]
        return a, b

    a0, b0 = open_ends(lo, hi)
    stack = [(a0, b0)] if a0 < b0 else []
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            intervals.append((a, b))
            continue
        m = (a + b) / 2
        if f(m) == 0:
            exact.append(m)
            la, lb = separate(m)
            stack.append((a, la))
            stack.append((lb, b))
        else:
            stack.append((a, m))
            stack.append((m, b))

    # rational roots inside isolating intervals: y = L*r is an integer root
    lead = abs(f.primitive()[-1])
    irrational = []
    for a, b in intervals:
        while lead * (b - a) >= 1:
            a, b = _bisect_step(f, seq, a, b)
        y = math.floor(lead * a) + 1
        if Fraction(y) < lead * b and f(Fraction(y, lead)) == 0:
            exact.append(Fraction(y, lead))
            continue
        while b - a > width:
            a, b = _bisect_step(f, seq, a, b)
        irrational.append((a, b))
    return exact, irrational


def isolate_roots(p: Poly, lo=Fraction(0), hi=Fraction(1), width: Fraction = DEFAULT_WIDTH):
    """All real roots of ``p`` in [lo, hi], sorted ascending.

    Rational roots come back as :class:`ExactRoot`; irrational ones as
    :class:`IntervalRoot` of width at most ``width`` whose defining polynomial
    is the square-free factor carrying the root's multiplicity.
    """
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    width = Fraction(width)
    roots: list = []
    for f, mult in yun(p):
        exact, irr = _isolate_squarefree(f, lo, hi, width)
        roots.extend(ExactRoot(v, mult) for v in exact)
        roots.extend(IntervalRoot(a, b, mult, f) for a, b in irr)
    return _sort_disjoint(roots)


def _sort_disjoint(roots: list) -> list:
    # distinct factors have distinct roots; refine until intervals separate
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                ri, rj = roots[i], roots[j]
                if ri.hi < rj.lo or rj.hi < ri.lo:
                    continue
                if isinstance(ri, ExactRoot) and isinstance(rj, ExactRoot):
                    continue
                if isinstance(ri, IntervalRoot):
                    roots[i] = ri.refined((ri.hi - ri.lo) / 2)
                if isinstance(rj, IntervalRoot):
                    roots[j] = rj.refined((rj.hi - rj.lo) / 2)
                changed = True
    return sorted(roots, key=lambda r: r.lo)


def root_in(root, lo: Fraction, hi: Fraction) -> bool:
    """Whether ``root`` lies in the closed interval [lo, hi]."""
    if isinstance(root, ExactRoot):
        return lo <= root.value <= hi
    r = root
    while True:
        if lo <= r.lo and r.hi <= hi:
            return True
        if r.hi <= lo or r.lo >= hi:
            return False
        r = r.refined((r.hi - r.lo) / 2)
