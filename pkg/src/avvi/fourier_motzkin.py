"""Strictness-aware Fourier-Motzkin elimination over an exact ordered field."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import rank, to_q

# a row is (coefficients, rhs); meaning depends on which list holds it


def _row(c: Iterable, d) -> tuple[tuple, object]:
    return tuple(to_q(v) for v in c), to_q(d)


@dataclass(frozen=True)
class LinIneqSystem:
    """Rows ``<c, x> > d`` (strict), ``<c, x> >= d`` (nonstrict), ``<c, x> = d``."""

    dim: int
    strict: tuple = ()
    nonstrict: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        for group in (self.strict, self.nonstrict, self.equalities):
            for c, _ in group:
                if len(c) != self.dim:
                    raise ValueError(f"row of width {len(c)} in a system of dimension {self.dim}")

    @classmethod
    def build(cls, dim: int, strict=(), nonstrict=(), equalities=()) -> "LinIneqSystem":
        return cls(
            dim,
            tuple(_row(c, d) for c, d in strict),
            tuple(_row(c, d) for c, d in nonstrict),
            tuple(_row(c, d) for c, d in equalities),
        )

    def __and__(self, other: "LinIneqSystem") -> "LinIneqSystem":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return LinIneqSystem(
            self.dim,
            self.strict + other.strict,
            self.nonstrict + other.nonstrict,
            self.equalities + other.equalities,
        )

    def relaxed(self) -> "LinIneqSystem":
        """Strict rows turned nonstrict: the closure when the system is feasible."""
        return LinIneqSystem(self.dim, (), self.strict + self.nonstrict, self.equalities)

    def contains(self, x: Sequence) -> bool:
        def val(c):
            acc = Fraction(0)
            for a, b in zip(c, x):
                if a != 0:
                    acc = acc + a * b
            return acc

        return (
            all(val(c) > d for c, d in self.strict)
            and all(val(c) >= d for c, d in self.nonstrict)
            and all(val(c) == d for c, d in self.equalities)
        )

    @property
    def num_rows(self) -> int:
        return len(self.strict) + len(self.nonstrict) + len(self.equalities)


@dataclass
class _Work:
    """Mutable rows keyed by kind during elimination."""

    strict: list = field(default_factory=list)
    nonstrict: list = field(default_factory=list)
    equalities: list = field(default_factory=list)
    infeasible: bool = False


def _normalize(c: tuple, d):
    # scale so the first nonzero coefficient is +-1
    for v in c:
        if v != 0:
            if v == 1 or v == -1:
                return c, d
            s = abs(v)
            return tuple(x / s for x in c), d / s
    return c, d


def _tidy(w: _Work) -> _Work:
    """Drop tautologies, detect constant contradictions, keep tightest parallel rows."""
    out = _Work()
    for c, d in w.equalities:
        if not any(v != 0 for v in c):
            if d != 0:
                out.infeasible = True
            continue
        c, d = _normalize(c, d)
        if any(_same(c, c2) and d == d2 for c2, d2 in out.equalities):
            continue
        out.equalities.append((c, d))
    best: list = []  # entries [c, d, strict]
    for strict, rows in ((True, w.strict), (False, w.nonstrict)):
        for c, d in rows:
            if not any(v != 0 for v in c):
                if (strict and not (0 > d)) or (not strict and not (0 >= d)):
                    out.infeasible = True
                continue
            c, d = _normalize(c, d)
            for entry in best:
                if _same(entry[0], c):
                    if d > entry[1] or (d == entry[1] and strict):
                        entry[1], entry[2] = d, strict
                    break
            else:
                best.append([c, d, strict])
    for c, d, strict in best:
        (out.strict if strict else out.nonstrict).append((c, d))
    out.infeasible = out.infeasible or w.infeasible
    return out


def _same(c1, c2) -> bool:
    return len(c1) == len(c2) and all(a == b for a, b in zip(c1, c2))


def _eliminate(w: _Work, j: int):
    """Eliminate variable j in place.  Returns back-substitution info."""
    for idx, (c, d) in enumerate(w.equalities):
        if c[j] != 0:
            # x_j = (d - sum_{k != j} c_k x_k) / c_j
            cj = c[j]
            w.equalities.pop(idx)

            def sub(row, c=c, d=d, cj=cj):
                rc, rd = row
                f = rc[j]
                if f == 0:
                    return row
                r = f / cj
                return tuple(a - r * b for a, b in zip(rc, c)), rd - r * d

            w.strict = [sub(r) for r in w.strict]
            w.nonstrict = [sub(r) for r in w.nonstrict]
            w.equalities = [sub(r) for r in w.equalities]
            return ("eq", c, d)
    lower, upper, keep_s, keep_n = [], [], [], []
    for strict, rows, keep in ((True, w.strict, keep_s), (False, w.nonstrict, keep_n)):
        for c, d in rows:
            if c[j] > 0:
                lower.append((c, d, strict))
            elif c[j] < 0:
                upper.append((c, d, strict))
            else:
                keep.append((c, d))
    bounds = (list(lower), list(upper))
    for cl, dl, sl in lower:
        for cu, du, su in upper:
            a, b = cl[j], -cu[j]
            c = tuple(b * x + a * y for x, y in zip(cl, cu))
            d = b * dl + a * du
            (keep_s if (sl or su) else keep_n).append((c, d))
    w.strict, w.nonstrict = keep_s, keep_n
    return ("fm",) + bounds


def _run(sys: LinIneqSystem, order: Sequence[int]):
    w = _tidy(_Work(list(sys.strict), list(sys.nonstrict), list(sys.equalities)))
    steps = []
    for j in order:
        if w.infeasible:
            break
        steps.append((j, _eliminate(w, j)))
        w = _tidy(w)
    return w, steps


def fm_project(sys: LinIneqSystem, keep: Iterable[int]) -> LinIneqSystem:
    """Project onto the coordinates in ``keep`` (result is indexed in sorted order)."""
    keep = sorted(set(keep))
    if any(k < 0 or k >= sys.dim for k in keep):
        raise ValueError("kept index out of range")
    drop = [j for j in range(sys.dim) if j not in keep]
    w, _ = _run(sys, drop)
    if w.infeasible:
        zero = tuple(Fraction(0) for _ in keep)
        return LinIneqSystem(len(keep), (), ((zero, Fraction(1)),), ())

    def pick(rows):
        return tuple((tuple(c[k] for k in keep), d) for c, d in rows)

    return LinIneqSystem(len(keep), pick(w.strict), pick(w.nonstrict), pick(w.equalities))


def _choose(lo, lo_strict, hi, hi_strict):
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1 if lo_strict else lo
    if hi is not None:
        return hi - 1 if hi_strict else hi
    return Fraction(0)


def is_feasible(sys: LinIneqSystem) -> tuple[bool, tuple | None]:
    """Decide nonemptiness exactly; on success also return a witness point."""
    order = list(range(sys.dim - 1, -1, -1))
    w, steps = _run(sys, order)
    if w.infeasible:
        return False, None
    x: list = [None] * sys.dim
    for j, info in reversed(steps):
        def partial(c):
            acc = Fraction(0)
            for k, v in enumerate(c):
                if k != j and v != 0:
                    acc = acc + v * x[k]
            return acc

        if info[0] == "eq":
            _, c, d = info
            x[j] = (d - partial(c)) / c[j]
            continue
        _, lower, upper = info
        lo = hi = None
        lo_s = hi_s = False
        for c, d, s in lower:
            v = (d - partial(c)) / c[j]
            if lo is None or v > lo or (v == lo and s):
                lo, lo_s = v, s
        for c, d, s in upper:
            v = (d - partial(c)) / c[j]
            if hi is None or v < hi or (v == hi and s):
                hi, hi_s = v, s
        x[j] = _choose(lo, lo_s, hi, hi_s)
    witness = tuple(Fraction(0) if v is None else v for v in x)
    return True, witness


def implicit_equalities(sys: LinIneqSystem) -> list[int]:
    """Indices of nonstrict rows that hold with equality on the whole (nonempty) set."""
    out = []
    for i, (c, d) in enumerate(sys.nonstrict):
        probe = LinIneqSystem(sys.dim, sys.strict + ((c, d),), sys.nonstrict, sys.equalities)
        if not is_feasible(probe)[0]:
            out.append(i)
    return out


def affine_hull_dimension(sys: LinIneqSystem) -> int:
    """Dimension of the affine hull of a nonempty system's solution set."""
    rows = [list(c) for c, _ in sys.equalities]
    rows += [list(sys.nonstrict[i][0]) for i in implicit_equalities(sys)]
    return sys.dim - (rank(rows) if rows else 0)
