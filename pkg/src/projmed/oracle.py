"""Brute-force global minimization on S^2 with a Lipschitz certificate.

The sine-metric objective is L-Lipschitz in geodesic angle with
L = sum of weights, because each term w_i sin(angle(v_i, p)) changes by at
most w_i times the change of the angle (|sin x - sin y| <= |x - y|, and the
line angle moves no faster than p). Evaluating J on a grid whose covering
radius is r therefore brackets the global minimum:

    min_grid J - L r  <=  min J  <=  min_grid J.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.spatial import ConvexHull

from ._parallel import parallel_map
from .classifier import SolutionSet
from .core import random_unit_vectors
from .errors import DimensionMismatch
from .objective import WeightedPointSet, evaluate_many

MIN_GRID = 12
RELAX_MAX_N = 256
RELAX_ITERS = 100
CHUNK = 1 << 14
STENCIL = 7
VALUE_SLACK = 1e-12


@dataclass(frozen=True)
class SphereGrid:
    points: np.ndarray
    covering_radius: float

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class CertifiedBound:
    lower: Optional[float]
    upper: float
    argmin_cell: np.ndarray
    resolution: float
    certified: bool = True

    def contains(self, value: float, slack: float = VALUE_SLACK) -> bool:
        lo = -math.inf if self.lower is None else self.lower
        return lo - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "argmin_cell": self.argmin_cell.tolist(),
            "resolution": self.resolution,
            "certified": self.certified,
        }


def fibonacci_sphere(n: int) -> np.ndarray:
    """Offset Fibonacci lattice: golden-angle longitudes, equal-area latitudes."""
    i = np.arange(n, dtype=float) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    theta = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def _relax(pts: np.ndarray, iters: int = RELAX_ITERS) -> np.ndarray:
    # Coulomb-like repulsion with a fixed step; pulls small lattices towards
    # the well-spread configurations the spiral misses (icosahedron at n=12).
    n = pts.shape[0]
    step = 4.0 / (n * math.sqrt(n))
    p = pts.copy()
    for _ in range(iters):
        d = p[:, None, :] - p[None, :, :]
        r2 = np.einsum("ijk,ijk->ij", d, d)
        np.fill_diagonal(r2, np.inf)
        f = (d / r2[:, :, None] ** 1.5).sum(axis=1)
        f -= np.einsum("ij,ij->i", f, p)[:, None] * p
        p = p + step * f
        p /= np.linalg.norm(p, axis=1, keepdims=True)
    return p


def covering_radius(points: np.ndarray) -> float:
    """Exact covering radius of a point set on S^2 (radians).

    The farthest sphere point from the set is a vertex of its spherical
    Voronoi diagram, i.e. the circumcenter of a hull facet, and its angle to
    the facet's vertices is arccos of the facet plane's distance to the
    origin. Requires the origin to be inside the hull.
    """
    hull = ConvexHull(points)
    h = -hull.equations[:, 3]
    if np.any(h <= 0):
        raise ValueError("origin is not strictly inside the hull; grid too sparse")
    return float(np.arccos(np.clip(h.min(), -1.0, 1.0)))


@functools.lru_cache(maxsize=16)
def _grid(n: int) -> SphereGrid:
    pts = fibonacci_sphere(n)
    if n <= RELAX_MAX_N:
        pts = _relax(pts)
    # tiny margin against rounding in the hull computation
    r = covering_radius(pts) * (1.0 + 1e-9) + 1e-12
    pts.setflags(write=False)
    return SphereGrid(pts, r)


def build_grid(n: int, projective: bool = False) -> SphereGrid:
    """Deterministic quasi-uniform grid with a certified covering radius.

    With ``projective=True`` only the points with z >= -sin(r) are kept:
    every line has a representative with z >= 0, whose nearest grid point
    lies in that band, so the covering radius still holds for lines.
    """
    if n < MIN_GRID:
        raise ValueError(f"grid needs at least {MIN_GRID} points, got {n}")
    g = _grid(int(n))
    if not projective:
        return g
    keep = g.points[:, 2] >= -math.sin(g.covering_radius)
    return SphereGrid(g.points[keep], g.covering_radius)


def _evaluate_chunked(ps: WeightedPointSet, cand: np.ndarray, metric: str = "sine") -> np.ndarray:
    chunks = [cand[i:i + CHUNK] for i in range(0, cand.shape[0], CHUNK)]
    return np.concatenate(parallel_map(lambda c: evaluate_many(ps, c, metric), chunks))


def _tangent_basis(p: np.ndarray) -> np.ndarray:
    # rows span the orthogonal complement of p
    _, _, vt = np.linalg.svd(p[None, :])
    return vt[1:]


def _stencil_offsets(k: int = STENCIL) -> np.ndarray:
    s = np.linspace(-1.0, 1.0, k)
    u, v = np.meshgrid(s, s, indexing="ij")
    return np.column_stack([u.ravel(), v.ravel()])


def refine(ps: WeightedPointSet, p: np.ndarray, value: float, radius: float, rounds: int,
           metric: str = "sine"):
    """Shrinking tangent-stencil search around ``p``; never returns a worse point."""
    offsets = _stencil_offsets()
    rho = radius
    for _ in range(rounds):
        basis = _tangent_basis(p)
        cand = p + rho * offsets @ basis
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        vals = evaluate_many(ps, cand, metric)
        j = int(np.argmin(vals))
        if vals[j] < value:
            p, value = cand[j], float(vals[j])
        rho *= 0.5
    return p, value


def _separated_best(points: np.ndarray, values: np.ndarray, k: int, sep: float) -> List[int]:
    order = np.argsort(values, kind="stable")
    chosen: List[int] = []
    cos_sep = math.cos(sep)
    for i in order:
        if all(abs(float(points[i] @ points[j])) < cos_sep for j in chosen):
            chosen.append(int(i))
            if len(chosen) == k:
                break
    return chosen


def certified_min(ps: WeightedPointSet, grid_n: int = 100_000, refine_iters: int = 40,
                  candidates: int = 8, metric: str = "sine") -> CertifiedBound:
    """Bracket min J over S^2 for a 3-D point set.

    lower = (grid minimum) - L r is a true lower bound; upper is the best
    value seen after refining the ``candidates`` best well-separated grid
    points for ``refine_iters`` halving rounds. The angular metric is
    certified the same way: the angle between lines is also 1-Lipschitz.
    """
    if ps.dim != 3:
        raise DimensionMismatch(f"certified search needs D = 3, got D = {ps.dim}")
    grid = build_grid(grid_n, projective=True)
    r = grid.covering_radius
    vals = _evaluate_chunked(ps, grid.points, metric)
    upper_grid = float(vals.min())
    lower = upper_grid - ps.lipschitz * r

    best_p, best_v = None, math.inf
    for i in _separated_best(grid.points, vals, candidates, 4.0 * r):
        p, v = refine(ps, grid.points[i], float(vals[i]), 2.0 * r, refine_iters, metric)
        if v < best_v:
            best_p, best_v = p, v
    return CertifiedBound(lower, best_v, best_p, r, True)


def sampled_min(ps: WeightedPointSet, samples: int = 100_000, seed: int = 0,
                refine_iters: int = 0, metric: str = "sine") -> CertifiedBound:
    """Best of random sphere samples and the data points; no lower bound.

    Used where covering grids are impractical (D > 3). ``refine_iters`` is
    accepted for interface symmetry and only used when D = 3.
    """
    rng = np.random.default_rng(seed)
    cand = np.vstack([ps.points, random_unit_vectors(rng, samples, ps.dim)])
    vals = _evaluate_chunked(ps, cand, metric)
    j = int(np.argmin(vals))
    p, v = cand[j], float(vals[j])
    if refine_iters and ps.dim == 3:
        p, v = refine(ps, p, v, 0.1, refine_iters, metric)
    return CertifiedBound(None, v, p, math.nan, False)


def projective_angle(p: np.ndarray, q: np.ndarray) -> float:
    return float(math.acos(min(1.0, abs(float(np.dot(p, q))))))


def oracle_agrees(ss: SolutionSet, cb: CertifiedBound, geo_tol: float) -> bool:
    """Does the certificate confirm the claimed solution set?

    Some member must be at least as good as the best point the oracle found,
    and the oracle's argmin must sit next to one of the members.
    """
    if not ss.members:
        return False
    if min(ss.values) > cb.upper + VALUE_SLACK:
        return False
    reach = geo_tol + (0.0 if math.isnan(cb.resolution) else cb.resolution)
    return any(projective_angle(cb.argmin_cell, pt) <= reach for _, pt in ss.members)
