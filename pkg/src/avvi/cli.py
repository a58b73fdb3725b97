"""Command-line front end: gen, analyze, verify, bounds, oracle."""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .components import build_piece_graph, count_components
from .instances import BoundKind, bounds, gen_family, lift_criterion, lift_variable
from .linalg import Matrix, determinant, pfaffian
from .model import (
    AffineOperator,
    AvviProblem,
    Unsupported,
    is_monotone,
    is_nondegenerate,
    is_skew_problem,
)
from .oracle import sampling_oracle
from .roots import ExactRoot
from .serialize import (
    InstanceError,
    dumps,
    loads_problem,
    problem_to_doc,
    rat_str,
    root_doc,
    write_atomic,
)
from .sweep import IrrationalCriticalValue, Mode, PointCell, Sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_SAMPLES = 200


class UsageError(Exception):
    pass


def workers() -> int:
    env = os.environ.get("AVVI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"AVVI_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def parallel_map(fn, items: list) -> list:
    """Order-preserving map, in a process pool when more than one worker is allowed."""
    n = min(workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _emit(text: str, path: str | None):
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _read_instance(path: str) -> tuple[AvviProblem, dict]:
    try:
        with open(path) as fh:
            return loads_problem(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (InstanceError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# gen


def cmd_generate(args) -> int:
    if args.family != "pp":
        raise UsageError(f"unknown family {args.family!r}")
    try:
        problem = gen_family(args.n, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(dumps(problem_to_doc(problem, {"family": "pp", "n": args.n, "p": args.p})), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _cell_doc(cell) -> dict:
    if isinstance(cell, PointCell):
        return {"kind": "point", "value": root_doc(cell.root)}
    return {
        "kind": "interval",
        "lo": root_doc(cell.lo),
        "hi": root_doc(cell.hi),
        "lo_closed": cell.lo_closed,
        "hi_closed": cell.hi_closed,
        "sample": rat_str(cell.sample),
    }


def _pattern_str(pattern) -> str:
    return "{" + ",".join(str(i) for i in sorted(pattern)) + "}"


def _piece_doc(pc) -> dict:
    doc = {"id": pc.id, "cell": pc.cell_index, "pattern": sorted(pc.pattern)}
    if pc.curve is not None:
        doc["kind"] = "curve"
        doc["curve"] = [
            {"num": [rat_str(v) for v in c.num.coeffs], "den": [rat_str(v) for v in c.den.coeffs]}
            for c in pc.curve.coords
        ]
    else:
        doc["kind"] = "fixed"
        doc["dimension"] = pc.fixed.dimension
    doc["witness"] = [rat_str(v) for v in pc.witness()]
    return doc


def _bounds_doc(m: int, n: int, p: int, chi: int | None) -> dict:
    out = {}
    for kind in BoundKind:
        value = bounds(m, n, p, kind)
        entry = {"value": None if value is None else str(value), "applicable": value is not None}
        if value is not None and chi is not None:
            if kind is BoundKind.LOWER_MONOTONE:
                entry["note"] = "lower bound for the family construction, not for every instance"
            else:
                entry["conforms"] = chi <= value
        out[kind.value] = entry
    return out


def _curve_csv(problem: AvviProblem, graph, report, samples: int) -> str:
    comp_of = {}
    for cid, group in enumerate(report.components):
        for pid in group:
            comp_of[pid] = cid
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["xi1"] + [f"x_{i + 1}" for i in range(problem.n)] + ["cell_id", "pattern", "component_id"])
    for pc in graph.pieces:
        if pc.curve is None:
            continue
        cell = pc.cell
        # irrational ends are replaced by the inner end of their isolating interval
        lo = cell.lo.value if isinstance(cell.lo, ExactRoot) else cell.lo.hi
        hi = cell.hi.value if isinstance(cell.hi, ExactRoot) else cell.hi.lo
        for j in range(samples):
            t = lo + (hi - lo) * Fraction(2 * j + 1, 2 * samples)
            x = pc.curve(t)
            w.writerow([repr(float(t))] + [repr(float(v)) for v in x]
                       + [pc.cell_index, _pattern_str(pc.pattern), comp_of[pc.id]])
    return buf.getvalue()


def analyze_problem(problem: AvviProblem, modes: list[Mode], *, algebraic: bool = False,
                    oracle: dict | None = None, timing: bool = False, meta: dict | None = None):
    """Build the analysis report; returns (report, graphs by mode)."""
    clock = {}
    t0 = time.perf_counter()
    report: dict = {
        "instance": {"n": problem.n, "m": problem.m, "p": problem.p, "meta": meta or {}},
        "checks": {"monotone": is_monotone(problem), "skew": is_skew_problem(problem)},
    }
    graphs = {}
    chi = None
    if problem.m == 2:
        report["checks"]["nondegenerate"] = is_nondegenerate(problem)
        try:
            sw = Sweep(problem, algebraic=algebraic)
            report["criticals"] = [root_doc(r) for r in sw.criticals]
            for mode in modes:
                graph = build_piece_graph(problem, mode, sweep=sw)
                rep = count_components(graph)
                graphs[mode] = (graph, rep)
                report[mode.value] = {
                    "cells": [_cell_doc(c) for c in graph.cells],
                    "pieces": [_piece_doc(pc) for pc in graph.pieces],
                    "edges": [list(e) for e in graph.edges],
                    "components": rep.components,
                    "witnesses": [[rat_str(v) for v in w] for w in rep.witnesses],
                }
                report[f"chi_{mode.value}"] = rep.count
            report["structural"] = "ok"
            chi = max(rep.count for _, rep in graphs.values())
        except IrrationalCriticalValue as exc:
            report["structural"] = "unsupported"
            report["structural_reason"] = f"{exc}; rerun with --algebraic"
        except Unsupported as exc:
            report["structural"] = "unsupported"
            report["structural_reason"] = str(exc)
    else:
        report["checks"]["nondegenerate"] = None
        report["structural"] = "unsupported"
        report["structural_reason"] = "exact counting needs exactly two criteria"
        report["warning"] = "structural mode unavailable; see the heuristic oracle result"
    clock["structural_s"] = time.perf_counter() - t0
    report["bounds"] = _bounds_doc(problem.m, problem.n, problem.p, chi)
    if oracle is not None:
        t1 = time.perf_counter()
        extra = None
        if "criticals" in report:
            extra = [Fraction(c) for c in report["criticals"] if isinstance(c, str)]
        res = sampling_oracle(problem, extra_params=extra, **oracle)
        report["oracle"] = {
            "heuristic": True,
            "count": res.count,
            "clipped": res.clipped,
            "points": res.n_points,
            "weights": res.n_weights,
            "settings": {k: (v.value if isinstance(v, Mode) else v) for k, v in oracle.items()},
        }
        clock["oracle_s"] = time.perf_counter() - t1
    if timing:
        report["timing"] = {k: round(v, 4) for k, v in clock.items()}
    return report, graphs


def _oracle_settings(args) -> dict:
    if args.grid <= 0 or args.eps <= 0 or args.clip <= 0:
        raise UsageError("grid, eps and clip must be positive")
    return {
        "grid": args.grid,
        "eps": args.eps,
        "clip": args.clip,
        "mode": Mode(args.oracle_mode),
        "simplex_divisions": args.simplex_divisions,
    }


def cmd_analyze(args) -> int:
    problem, meta = _read_instance(args.input)
    modes = [Mode.WEAK, Mode.PARETO] if args.mode == "both" else [Mode(args.mode)]
    oracle = _oracle_settings(args) if args.oracle else None
    report, graphs = analyze_problem(problem, modes, algebraic=args.algebraic, oracle=oracle,
                                     timing=args.timing, meta=meta)
    if args.curve_csv:
        if not graphs:
            raise UsageError("no structural analysis available for the curve export")
        graph, rep = graphs.get(Mode.WEAK) or next(iter(graphs.values()))
        write_atomic(args.curve_csv, _curve_csv(problem, graph, rep, args.csv_samples))
    _emit(dumps(report), args.report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _pp_row(task):
    n, p, with_oracle = task
    problem = gen_family(n, p)
    expected = n // 2 + p + 1
    chi = {}
    for mode in Mode:
        chi[mode] = count_components(build_piece_graph(problem, mode)).count
    lower = bounds(2, n, p, BoundKind.LOWER_MONOTONE)
    upper = bounds(2, n, p, BoundKind.SKEW_BICRITERIA_UPPER)
    general = bounds(2, n, p, BoundKind.GENERAL_UPPER)
    c = chi[Mode.WEAK]
    bound_ok = (lower is None or lower <= c) and (upper is None or c <= upper) and c <= general
    orc = None
    if with_oracle:
        orc = sampling_oracle(problem).count
    ok = chi[Mode.WEAK] == expected and chi[Mode.PARETO] == expected and bound_ok
    ok = ok and (orc is None or orc == expected)
    return [f"P(n={n},p={p})", expected, f"{chi[Mode.WEAK]}/{chi[Mode.PARETO]}",
            "ok" if bound_ok else "FAIL", "-" if orc is None else orc, ok]


def random_skew(rng: random.Random, n: int, lo: int = -5, hi: int = 5) -> Matrix:
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(lo, hi)
            M[i][j], M[j][i] = v, -v
    return Matrix(M)


def random_skew_problem(rng: random.Random, n: int) -> AvviProblem:
    """Random unconstrained skew bicriteria instance, rejection-sampled for nondegeneracy."""
    while True:
        ops = tuple(
            AffineOperator(random_skew(rng, n), tuple(Fraction(rng.randint(-5, 5)) for _ in range(n)))
            for _ in range(2)
        )
        problem = AvviProblem(ops)
        if is_nondegenerate(problem):
            return problem


def _even_sizes(n_max: int) -> list[int]:
    return [n for n in range(2, n_max + 1, 2)]


def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells) + "\n"


def _skew_row(task):
    n, seed = task
    problem = random_skew_problem(random.Random(seed), n)
    chi = count_components(build_piece_graph(problem, Mode.WEAK, algebraic=True)).count
    upper = bounds(2, n, 0, BoundKind.SKEW_BICRITERIA_UPPER)
    general = bounds(2, n, 0, BoundKind.GENERAL_UPPER)
    ok = chi <= upper and chi <= general
    return [f"skew(n={n},seed={seed})", f"<={upper}", chi, "ok" if ok else "FAIL", "-", ok]


def _lift_rows(n_max: int) -> list:
    rows = []
    for n in _even_sizes(n_max):
        for p in sorted({0, min(1, n // 2)}):
            base = gen_family(n, p)
            chi = count_components(build_piece_graph(base, Mode.WEAK)).count
            lifted = count_components(build_piece_graph(lift_variable(base), Mode.WEAK)).count
            ok = lifted == chi
            rows.append([f"lift-var P(n={n},p={p})", chi, lifted, "-", "-", ok])
            orc = sampling_oracle(lift_criterion(base)).count
            ok = orc == chi
            rows.append([f"lift-crit P(n={n},p={p})", chi, "-", "-", orc, ok])
    return rows


def cmd_verify(args) -> int:
    headers = ["instance", "expected", "computed", "bounds", "oracle", "status"]
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    if args.suite == "cayley":
        rng = random.Random(args.seed)
        sizes = _even_sizes(args.n_max)
        good = 0
        for k in range(args.count):
            M = random_skew(rng, sizes[k % len(sizes)])
            good += pfaffian(M) ** 2 == determinant(M)
        print(f"cayley: {good}/{args.count} identities hold")
        return EXIT_OK if good == args.count else EXIT_FAIL
    if args.suite == "pp":
        tasks = [(n, p, args.oracle) for n in _even_sizes(args.n_max) for p in range(n // 2 + 1)]
        rows = parallel_map(_pp_row, tasks)
    elif args.suite == "skew":
        rng = random.Random(args.seed)
        tasks = [(_even_sizes(args.n_max)[k % len(_even_sizes(args.n_max))], rng.randrange(2**32))
                 for k in range(args.count)]
        rows = parallel_map(_skew_row, tasks)
    elif args.suite == "lift":
        rows = _lift_rows(args.n_max)
    else:
        raise UsageError(f"unknown suite {args.suite!r}")
    out = [r[:-1] + ["pass" if r[-1] else "FAIL"] for r in rows]
    sys.stdout.write(_table(headers, out))
    failed = sum(not r[-1] for r in rows)
    print(f"{args.suite}: {len(rows) - failed}/{len(rows)} passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# bounds and oracle


def cmd_bounds(args) -> int:
    if args.m < 1 or args.n < 1 or args.p < 0:
        raise UsageError("need m >= 1, n >= 1, p >= 0")
    rows = []
    for kind in BoundKind:
        v = bounds(args.m, args.n, args.p, kind)
        rows.append([kind.value, "Inapplicable" if v is None else v])
    sys.stdout.write(_table(["bound", "value"], rows))
    return EXIT_OK


def cmd_oracle(args) -> int:
    problem, _ = _read_instance(args.input)
    res = sampling_oracle(problem, **_oracle_settings(args))
    doc = {"heuristic": True, "count": res.count, "clipped": res.clipped,
           "points": res.n_points, "weights": res.n_weights}
    _emit(dumps(doc), args.output)
    return EXIT_OK


def _add_oracle_flags(p):
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--clip", type=float, default=10.0)
    p.add_argument("--oracle-mode", choices=["weak", "pareto"], default="weak")
    p.add_argument("--simplex-divisions", type=int, default=60)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avvi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a family instance")
    g.add_argument("--family", default="pp")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="exact component analysis of an instance")
    a.add_argument("input")
    a.add_argument("--mode", choices=["weak", "pareto", "both"], default="both")
    a.add_argument("-o", "--report")
    a.add_argument("--curve-csv")
    a.add_argument("--csv-samples", type=int, default=CSV_SAMPLES)
    a.add_argument("--algebraic", action="store_true", help="allow irrational critical values")
    a.add_argument("--oracle", action="store_true", help="append the sampling cross-check")
    a.add_argument("--timing", action="store_true")
    _add_oracle_flags(a)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="batch checks of the family results")
    v.add_argument("--suite", choices=["pp", "cayley", "lift", "skew"], required=True)
    v.add_argument("--n-max", type=int, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=200)
    v.add_argument("--oracle", action="store_true", help="add the sampling oracle column")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="print the component bounds")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=int, default=0)
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="standalone sampling oracle")
    o.add_argument("input")
    o.add_argument("-o", "--output")
    _add_oracle_flags(o)
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
