"""Multi-start Riemannian descent for weighted point sets on S^{D-1}.

The objective is smooth away from the data lines and has a cone-shaped
kink on each of them, so the solver always compares the data points
themselves as candidates and runs gradient descent (Armijo backtracking,
Barzilai-Borwein trial steps, renormalization as retraction) from a set of
deterministic starts for the smooth part.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .classifier import classify, triangle_point_set
from .core import ANGLE_TOL, ProjectiveTriangle, wedge_norm
from .objective import POLE_TOL, WeightedPointSet, evaluate, riemannian_gradient
from .errors import PoleSingularity

INTERIOR = "interior"
VERTEX = "vertex"
MAX_ITERS = "max_iters"

TraceRow = Tuple[int, float, float]


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 5000
    grad_tol: float = 1e-10
    step_shrink: float = 0.5
    armijo_c: float = 1e-4
    restarts: int = 8
    seed: int = 0
    metric: str = "sine"
    initial_step: float = 1.0
    vertex_radius: float = 1e-6

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1:
            raise ValueError("max_iters and restarts must be at least 1")
        if not (0 < self.step_shrink < 1 and 0 < self.armijo_c < 1):
            raise ValueError("step_shrink and armijo_c must lie in (0, 1)")


@dataclass
class SolverResult:
    minimizer: np.ndarray
    value: float
    residual: float
    status: str
    vertex_index: Optional[int] = None
    trace: List[TraceRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "minimizer": self.minimizer.tolist(),
            "value": self.value,
            "residual": self.residual,
            "status": self.status,
            "vertex_index": self.vertex_index,
            "iterations": len(self.trace),
        }


def objective_change(ps: WeightedPointSet, p: np.ndarray, q: np.ndarray, metric: str = "sine") -> float:
    """J(q) - J(p) without the cancellation of subtracting two evaluations.

    Lets the line search see decreases far below the rounding level of J.
    Everything is expressed through the exactly computed difference q - p,
    and p, q are treated as directions, so their norms (which are 1 only up
    to rounding) do not leak into the result.
    """
    diff = q - p
    vv = np.einsum("ij,ij->i", ps.points, ps.points)
    gp = ps.points @ p
    gq = ps.points @ q
    vd = ps.points @ diff
    nq2_np2 = float(diff @ (q + p))  # |q|^2 - |p|^2
    np2, nq2 = float(p @ p), float(q @ q)
    yp = wedge_norm(ps.points, p[None, :])
    yq = wedge_norm(ps.points, q[None, :])
    if metric == "sine":
        # J(x/|x|) = J_hom(x)/|x| with J_hom built from homogeneous wedge norms
        dy2 = vv * nq2_np2 - vd * (gq + gp)  # yq^2 - yp^2
        den = yp + yq
        dhom = np.divide(dy2, den, out=np.zeros_like(den), where=den > 0) @ ps.weights
        jp = yp @ ps.weights
        np_, nq = math.sqrt(np2), math.sqrt(nq2)
        dinv = -nq2_np2 / ((np_ + nq) * np_ * nq)  # 1/|q| - 1/|p|
        return float(dhom / nq + jp * dinv)
    ap, aq = np.abs(gp), np.abs(gq)
    # tan of the angle difference, numerator yq|gp| - yp|gq| without cancellation
    cross = vv * (nq2 * (-vd) * (gp + gq) + gq * gq * nq2_np2)
    den = yq * ap + yp * aq
    num = np.divide(cross, den, out=np.zeros_like(den), where=den > 0)
    return float(np.arctan2(num, ap * aq + yp * yq) @ ps.weights)


def vertex_residual(ps: WeightedPointSet, i: int, metric: str = "sine") -> float:
    """First-order optimality gap at data point ``i``.

    Every term whose line passes through the point contributes a cone of
    slope w_j; the point is first-order optimal iff the gradient of the
    remaining smooth terms is no longer than the total cone slope.
    """
    v = ps.points[i]
    g = ps.points @ v
    on = np.abs(g) > 1.0 - POLE_TOL
    if np.all(on):
        return 0.0
    rest = WeightedPointSet(ps.points[~on], ps.weights[~on])
    grad = riemannian_gradient(rest, v, metric)
    return max(0.0, float(np.linalg.norm(grad)) - float(ps.weights[on].sum()))


def _nearest_line(ps: WeightedPointSet, p: np.ndarray) -> Tuple[int, float]:
    ang = np.arctan2(wedge_norm(ps.points, p[None, :]), np.abs(ps.points @ p))
    i = int(np.argmin(ang))
    return i, float(ang[i])


@dataclass
class DescentRun:
    point: np.ndarray
    value: float
    residual: float
    status: str
    vertex_index: Optional[int]
    trace: List[TraceRow]


def descend(ps: WeightedPointSet, p0, cfg: SolverConfig = SolverConfig()) -> DescentRun:
    """Riemannian gradient descent from ``p0``.

    Stops when the gradient norm reaches ``grad_tol``, when the iterate comes
    within ``vertex_radius`` of a data line (the vertex is then compared
    directly), or after ``max_iters`` iterations.
    """
    p = np.asarray(p0, dtype=float)
    p = p / np.linalg.norm(p)
    value = evaluate(ps, p, cfg.metric)
    trace: List[TraceRow] = []
    prev_p = prev_g = None
    eta = cfg.initial_step

    def absorb(i: int) -> DescentRun:
        v = ps.points[i]
        jv = evaluate(ps, v, cfg.metric)
        if jv <= evaluate(ps, p, cfg.metric):
            return DescentRun(v.copy(), jv, vertex_residual(ps, i, cfg.metric), VERTEX, i, trace)
        return DescentRun(p, value, math.nan, MAX_ITERS, None, trace)

    for it in range(cfg.max_iters):
        i, ang = _nearest_line(ps, p)
        if ang < cfg.vertex_radius:
            return absorb(i)
        try:
            g = riemannian_gradient(ps, p, cfg.metric)
        except PoleSingularity:
            return absorb(i)
        r = float(np.linalg.norm(g))
        trace.append((it, value, r))
        if r <= cfg.grad_tol:
            return DescentRun(p, evaluate(ps, p, cfg.metric), r, INTERIOR, None, trace)

        if prev_p is not None:
            s = p - prev_p
            y = g - prev_g
            sy = float(s @ y)
            eta = float(s @ s) / sy if sy > 0 else cfg.initial_step
            eta = min(max(eta, 1e-12), 1e6)
        decrease = 0.0
        while True:
            q = p - eta * g
            q = q / np.linalg.norm(q)
            decrease = objective_change(ps, p, q, cfg.metric)
            if decrease <= -cfg.armijo_c * eta * r * r:
                break
            eta *= cfg.step_shrink
            if eta < 1e-18:
                break
        if eta < 1e-18:
            # no representable descent step left
            return DescentRun(p, evaluate(ps, p, cfg.metric), r, MAX_ITERS, None, trace)
        prev_p, prev_g = p, g
        p = q
        value = value + decrease

    r = float("nan")
    try:
        r = float(np.linalg.norm(riemannian_gradient(ps, p, cfg.metric)))
    except PoleSingularity:
        pass
    status = INTERIOR if r <= cfg.grad_tol else MAX_ITERS
    return DescentRun(p, evaluate(ps, p, cfg.metric), r, status, None, trace)


def starting_points(ps: WeightedPointSet, cfg: SolverConfig) -> List[np.ndarray]:
    """Deterministic starts: signed weighted sums, then seeded random points.

    The sign of the first point is fixed since x and -x are the same line.
    """
    starts: List[np.ndarray] = []
    m = min(ps.n, 8)
    weighted = ps.weights[:, None] * ps.points
    tail = weighted[m:].sum(axis=0)
    for signs in itertools.product((1.0, -1.0), repeat=m - 1):
        if len(starts) >= cfg.restarts:
            break
        x = weighted[0] + np.asarray(signs) @ weighted[1:m] + tail if m > 1 else weighted[0] + tail
        nrm = np.linalg.norm(x)
        if nrm < 1e-12:
            continue
        x = x / nrm
        if any(min(np.linalg.norm(x - s), np.linalg.norm(x + s)) < 1e-9 for s in starts):
            continue
        starts.append(x)
    rng = np.random.default_rng(cfg.seed)
    while len(starts) < cfg.restarts:
        x = rng.standard_normal(ps.dim)
        starts.append(x / np.linalg.norm(x))
    return starts


def solve(ps: WeightedPointSet, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """Best of all data points and all descent runs; ties go to the earliest."""
    best: Optional[SolverResult] = None
    for i, v in enumerate(ps.points):
        val = evaluate(ps, v, cfg.metric)
        if best is None or val < best.value:
            best = SolverResult(v.copy(), val, math.nan, VERTEX, i)
    for start in starting_points(ps, cfg):
        run = descend(ps, start, cfg)
        if run.value < best.value:
            best = SolverResult(run.point, run.value, run.residual, run.status, run.vertex_index, run.trace)
    if best.status == VERTEX and math.isnan(best.residual):
        best.residual = vertex_residual(ps, best.vertex_index, cfg.metric)
    best.value = evaluate(ps, best.minimizer, cfg.metric)
    return best


def solve_triangle(t: ProjectiveTriangle, cfg: SolverConfig = SolverConfig(),
                   tol: float = ANGLE_TOL) -> SolverResult:
    """Closed form when the classifier covers ``t``, numerical solve otherwise."""
    ps = triangle_point_set(t)
    ss = classify(t, tol)
    if not ss.covered:
        return solve(ps, cfg)
    label, point = ss.members[0]
    value = evaluate(ps, point, cfg.metric)
    if label == "E":
        return SolverResult(point, value, float(np.linalg.norm(riemannian_gradient(ps, point))), INTERIOR)
    idx = "ABC".index(label)
    return SolverResult(point, value, vertex_residual(ps, idx), VERTEX, idx)
