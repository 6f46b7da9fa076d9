"""Command-line front end: classify, solve, verify, phase.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 verification failure, 2 bad input or usage, 3 triangle not covered by
the closed-form classifier.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .classifier import VALUE_TIE_TOL, centroid_value, classify, vertex_objective_table
from .core import (ANGLE_TOL, PHYSICAL_ANGLE_TOL, ProjectiveTriangle, normalize_signs, read_points,
                   read_weights, triangle_from_degrees)
from .errors import ProjmedError
from .lemma_lab import SECTIONS, verify_lemma_suite
from .objective import METRICS, WeightedPointSet
from .oracle import certified_min, sampled_min
from .solver import SolverConfig, solve

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_NOT_COVERED = 3

PHASE_HEADER = ["phi_ab", "phi_ac", "phi_bc", "winner", "J_A", "J_B", "J_C", "J_E",
                "oracle_low", "oracle_high"]
PHASE_DEFAULTS = {"equilateral": (40.0, 80.0), "general": (60.0, 90.0)}
CERTIFY_SLACK = 1e-9


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any] = field(default_factory=dict)
    timing_ms: float = 0.0
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


class UsageError(Exception):
    """Malformed command-line values; mapped to exit code 2."""


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _vec(v) -> str:
    return " ".join(f"{x: .15f}" for x in np.asarray(v, dtype=float))


def _parse_angles(text: str) -> List[float]:
    try:
        vals = [float(s) for s in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--angles expects three comma-separated degrees, got {text!r}") from exc
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"--angles expects three comma-separated degrees, got {text!r}")
    return vals


def _triangle(args) -> ProjectiveTriangle:
    if args.angles is not None:
        return triangle_from_degrees(*_parse_angles(args.angles), big=args.big)
    return normalize_signs(read_points(args.points))


# classify ------------------------------------------------------------------

def cmd_classify(args) -> RunReport:
    tol = PHYSICAL_ANGLE_TOL if args.physical else args.tol
    rep = RunReport("classify", {"angles": args.angles, "points": args.points, "big": args.big,
                                 "tol": tol})
    t = _triangle(args)
    ss = classify(t, tol)
    rep.outputs = {"angles_deg": list(t.angles.degrees()), "big": t.big, **ss.to_dict()}
    if not ss.covered:
        rep.exit_code = EXIT_NOT_COVERED
        print("triangle is outside the closed-form classification; "
              "use `projmed solve --points FILE` for a numerical answer", file=sys.stderr)
        return rep
    if not args.json:
        d = t.angles.degrees()
        print(f"angles: phi_ab={_fmt(d[0])} phi_ac={_fmt(d[1])} phi_bc={_fmt(d[2])} big={t.big}")
        print(f"coverage: {ss.coverage.value}")
        for (label, pt), val in zip(ss.members, ss.values):
            print(f"{label}  {_vec(pt)}  J={_fmt(val)}")
    return rep


# solve ---------------------------------------------------------------------

def cmd_solve(args) -> RunReport:
    rep = RunReport("solve", {"points": args.points, "weights": args.weights, "metric": args.metric,
                              "seed": args.seed, "restarts": args.restarts,
                              "max_iters": args.max_iters, "certify": args.certify,
                              "grid": args.grid})
    pts = read_points(args.points)
    w = read_weights(args.weights) if args.weights else np.ones(pts.shape[0])
    if w.shape[0] != pts.shape[0]:
        raise UsageError(f"{pts.shape[0]} points but {w.shape[0]} weights")
    ps = WeightedPointSet(pts, w)
    cfg = SolverConfig(max_iters=args.max_iters, restarts=args.restarts, seed=args.seed,
                       metric=args.metric)
    res = solve(ps, cfg)
    out = res.to_dict()
    if args.certify:
        if ps.dim == 3:
            cb = certified_min(ps, args.grid, metric=args.metric)
        else:
            print(f"D = {ps.dim}: no covering grid, falling back to random sampling (uncertified)",
                  file=sys.stderr)
            cb = sampled_min(ps, args.grid, seed=args.seed, refine_iters=0, metric=args.metric)
        out["certificate"] = cb.to_dict()
        out["agrees"] = cb.contains(res.value, CERTIFY_SLACK)
    out["certified"] = bool(args.certify and ps.dim == 3)
    rep.outputs = out
    if not args.json:
        print(f"minimizer: {_vec(res.minimizer)}")
        print(f"value: {_fmt(res.value)}")
        print(f"residual: {res.residual:.3e}")
        print(f"status: {res.status}")
        if res.vertex_index is not None:
            print(f"vertex_index: {res.vertex_index}")
        if args.certify:
            cert = out["certificate"]
            lo = "-inf" if cert["lower"] is None else _fmt(cert["lower"])
            print(f"certificate: [{lo}, {_fmt(cert['upper'])}] resolution={cert['resolution']:.3e}")
            print(f"agrees: {'yes' if out['agrees'] else 'no'}")
        print(f"certified: {'yes' if out['certified'] else 'no'}")
    return rep


# verify --------------------------------------------------------------------

def cmd_verify(args) -> RunReport:
    sections = list(SECTIONS) if args.suite == "all" else [args.suite.upper()]
    rep = RunReport("verify", {"suite": args.suite, "seed": args.seed, "trials": args.trials})
    reports = []
    for sec in sections:
        reports.extend(verify_lemma_suite(sec, args.seed, args.trials))
    bad = sum(r.violations for r in reports)
    rep.outputs = {"reports": [r.to_dict() for r in reports], "violations": bad}
    rep.exit_code = EXIT_OK if bad == 0 else EXIT_VIOLATION
    if not args.json:
        for r in reports:
            print(r.line())
        print(f"total: {len(reports)} claims, {bad} violations")
    return rep


# phase ---------------------------------------------------------------------

def degree_range(lo: float, hi: float, step: float) -> List[float]:
    """lo, lo+step, ... up to hi inclusive; empty when lo > hi."""
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)) or step <= 0:
        raise UsageError("range needs finite --from/--to and a positive --step")
    if lo > hi:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 10) for k in range(n)]


def _winner(values: Dict[str, float]) -> str:
    best = min(values.values())
    return "|".join(k for k, v in values.items() if v - best <= VALUE_TIE_TOL)


def phase_row(t: ProjectiveTriangle, degs: Sequence[float], certify: bool, grid: int) -> List[str]:
    ja, jb, jc = vertex_objective_table(t)
    vals = {"A": ja, "B": jb, "C": jc}
    je = math.nan
    if not t.big:
        je = centroid_value(t)
        vals["E"] = je
    lo = hi = ""
    if certify:
        cb = certified_min(WeightedPointSet.of(t.vertices), grid)
        lo, hi = repr(cb.lower), repr(cb.upper)
    return [*(_fmt(d) for d in degs), _winner(vals), repr(ja), repr(jb), repr(jc),
            "" if math.isnan(je) else repr(je), lo, hi]


def phase_triangles(mode: str, grid_deg: List[float]):
    if mode == "equilateral":
        for phi in grid_deg:
            yield (phi, phi, phi)
        return
    for i, ab in enumerate(grid_deg):
        for j in range(i, len(grid_deg)):
            for k in range(j, len(grid_deg)):
                yield (ab, grid_deg[j], grid_deg[k])


def cmd_phase(args) -> RunReport:
    lo_default, hi_default = PHASE_DEFAULTS[args.mode]
    lo = lo_default if args.lo is None else args.lo
    hi = hi_default if args.hi is None else args.hi
    rep = RunReport("phase", {"mode": args.mode, "from": lo, "to": hi, "step": args.step,
                              "certify": args.certify, "grid": args.grid})
    grid_deg = degree_range(lo, hi, args.step)
    rows = []
    skipped = 0
    for degs in phase_triangles(args.mode, grid_deg):
        try:
            t = triangle_from_degrees(*degs)
        except ProjmedError:
            skipped += 1
            continue
        rows.append(phase_row(t, degs, args.certify, args.grid))
    if skipped:
        print(f"skipped {skipped} unrealizable angle triples", file=sys.stderr)
    rep.outputs = {"header": PHASE_HEADER, "rows": rows}
    if not args.json:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(PHASE_HEADER)
        writer.writerows(rows)
    return rep


# entry point ---------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projmed",
                                description="Sine-distance medians of lines in projective space.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="closed-form minimizer set of a projective triangle")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--angles", help="three pairwise line angles in degrees, e.g. 65,70,80")
    src.add_argument("--points", help="file with three lines, one vector per row")
    c.add_argument("--big", action="store_true", help="realize --angles as a big triangle")
    c.add_argument("--tol", type=float, default=ANGLE_TOL, help="angle tolerance in radians")
    c.add_argument("--physical", action="store_true",
                   help=f"use the loose tolerance {PHYSICAL_ANGLE_TOL:g} rad for noisy input")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="numerical weighted median of a point file")
    s.add_argument("--points", required=True)
    s.add_argument("--weights")
    s.add_argument("--metric", choices=METRICS, default="sine")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=_positive_int, default=8)
    s.add_argument("--max-iters", type=_positive_int, default=5000)
    s.add_argument("--certify", action="store_true", help="bracket the minimum with the grid oracle")
    s.add_argument("--grid", type=_positive_int, default=100_000)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="randomized checks of the supporting lemmas")
    v.add_argument("--suite", choices=[x.lower() for x in SECTIONS] + ["all"], default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=_positive_int, default=100)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    ph = sub.add_parser("phase", help="CSV of winners over an angle grid")
    ph.add_argument("--mode", choices=sorted(PHASE_DEFAULTS), default="equilateral")
    ph.add_argument("--from", dest="lo", type=float)
    ph.add_argument("--to", dest="hi", type=float)
    ph.add_argument("--step", type=float, default=1.0)
    ph.add_argument("--certify", action="store_true")
    ph.add_argument("--grid", type=_positive_int, default=100_000)
    ph.add_argument("--json", action="store_true")
    ph.set_defaults(func=cmd_phase)
    return p


def run(argv: Optional[Sequence[str]] = None) -> RunReport:
    """Parse and execute; returns the report (argparse errors still exit 2)."""
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
    except (ProjmedError, UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RunReport(args.command, {}, {"error": str(exc), "kind": type(exc).__name__},
                         exit_code=EXIT_INPUT)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    if getattr(args, "json", False):
        print(rep.to_json())
    print(f"{args.command}: {rep.timing_ms:.0f} ms", file=sys.stderr)
    return rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
