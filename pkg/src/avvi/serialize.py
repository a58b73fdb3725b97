"""Instance files and canonical JSON.

Rationals are written as strings ("3", "-1/2") so nothing passes through a
float.  Readers also accept JSON integers.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction

from .algebraic import AlgebraicNumber
from .model import AffineOperator, AvviProblem, Polyhedron
from .roots import ExactRoot, IntervalRoot

_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")


class InstanceError(ValueError):
    """Malformed instance document."""


def parse_rational(v) -> Fraction:
    if isinstance(v, bool):
        raise InstanceError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RAT.match(v.strip()):
        num, _, den = v.strip().partition("/")
        if den and int(den) == 0:
            raise InstanceError(f"zero denominator in {v!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise InstanceError(f"not a rational: {v!r}")


def rat_str(v) -> str:
    if isinstance(v, AlgebraicNumber):
        return f"~{float(v):.12g}"
    return str(Fraction(v))


def dumps(doc) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def write_atomic(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _matrix(rows) -> list:
    return [[rat_str(v) for v in row] for row in rows]


def problem_to_doc(problem: AvviProblem, meta: dict | None = None) -> dict:
    K = problem.constraint
    return {
        "n": problem.n,
        "m": problem.m,
        "operators": [{"M": _matrix(op.M.rows), "q": [rat_str(v) for v in op.q]} for op in problem.operators],
        "constraints": None if K is None else {"A": _matrix(K.A.rows), "b": [rat_str(v) for v in K.b]},
        "meta": meta or {},
    }


def _rat_matrix(rows, nrows: int | None, ncols: int, what: str) -> list:
    if not isinstance(rows, list) or (nrows is not None and len(rows) != nrows):
        raise InstanceError(f"{what} must be a list of {nrows} rows")
    out = []
    for r in rows:
        if not isinstance(r, list) or len(r) != ncols:
            raise InstanceError(f"{what} rows must have length {ncols}")
        out.append([parse_rational(v) for v in r])
    return out


def problem_from_doc(doc) -> tuple[AvviProblem, dict]:
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    try:
        n, m, ops = doc["n"], doc["m"], doc["operators"]
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(n, int) or n < 1 or not isinstance(m, int) or m < 1:
        raise InstanceError("n and m must be positive integers")
    if not isinstance(ops, list) or len(ops) != m:
        raise InstanceError(f"expected {m} operators")
    operators = []
    for k, op in enumerate(ops):
        if not isinstance(op, dict) or "M" not in op or "q" not in op:
            raise InstanceError(f"operator {k} needs M and q")
        M = _rat_matrix(op["M"], n, n, f"operator {k} M")
        q = op["q"]
        if not isinstance(q, list) or len(q) != n:
            raise InstanceError(f"operator {k} q must have length {n}")
        operators.append(AffineOperator.build(M, [parse_rational(v) for v in q]))
    cons = doc.get("constraints")
    K = None
    if cons is not None:
        if not isinstance(cons, dict) or "A" not in cons or "b" not in cons:
            raise InstanceError("constraints need A and b")
        A = _rat_matrix(cons["A"], None, n, "constraint A")
        b = cons["b"]
        if not isinstance(b, list) or len(b) != len(A):
            raise InstanceError("constraint b must match the rows of A")
        if not A:
            raise InstanceError("use null constraints for an unconstrained problem")
        K = Polyhedron.build(A, [parse_rational(v) for v in b], n)
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise InstanceError("meta must be an object")
    return AvviProblem(tuple(operators), K), meta


def loads_problem(text: str) -> tuple[AvviProblem, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from None
    return problem_from_doc(doc)


def root_doc(root):
    """Critical value as a string (rational) or an isolating-interval record."""
    if isinstance(root, ExactRoot):
        return rat_str(root.value)
    assert isinstance(root, IntervalRoot)
    return {
        "poly": [rat_str(c) for c in root.poly.coeffs],
        "lo": rat_str(root.lo),
        "hi": rat_str(root.hi),
        "approx": f"~{root.approx():.12g}",
    }
