"""Weighted sum-of-distances objective on the sphere and its gradient.

J(p) = sum_i w_i d(v_i, p) with d the sine distance (default) or the
angle between lines. Both are even in p and in every v_i, so J is really
a function on projective space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import UNIT_TOL, angular_distances, as_unit, sine_distances, wedge_norm
from .errors import DimensionMismatch, NotUnitVector, PoleSingularity

POLE_TOL = 1e-12
METRICS = ("sine", "angular")


@dataclass(frozen=True)
class WeightedPointSet:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if pts.shape[0] < 1 or pts.shape[0] != w.shape[0]:
            raise ValueError(f"{pts.shape[0]} points but {w.shape[0]} weights")
        if pts.shape[1] < 2:
            raise DimensionMismatch("points need at least 2 coordinates")
        if np.any(~(w > 0)) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be positive and finite")
        if np.any(np.abs(np.linalg.norm(pts, axis=1) - 1.0) > UNIT_TOL):
            raise NotUnitVector("every point must be a unit vector")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def of(cls, points, weights: Optional[Sequence[float]] = None, normalize: bool = False):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if normalize:
            pts = np.vstack([as_unit(v, normalize=True) for v in pts])
        if weights is None:
            weights = np.ones(pts.shape[0])
        return cls(pts, np.asarray(weights, dtype=float))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def lipschitz(self) -> float:
        # |sin x - sin y| <= |x - y| and the line angle is 1-Lipschitz in p,
        # so each term is w_i-Lipschitz in geodesic angle.
        return float(self.weights.sum())


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def evaluate_many(ps: WeightedPointSet, candidates: np.ndarray, metric: str = "sine") -> np.ndarray:
    """Objective at each row of ``candidates``."""
    _check_metric(metric)
    cand = np.atleast_2d(np.asarray(candidates, dtype=float))
    if cand.shape[1] != ps.dim:
        raise DimensionMismatch(f"candidate dimension {cand.shape[1]} != data dimension {ps.dim}")
    dist = sine_distances(cand, ps.points) if metric == "sine" else angular_distances(cand, ps.points)
    return dist @ ps.weights


def evaluate(ps: WeightedPointSet, p, metric: str = "sine") -> float:
    p = np.asarray(p, dtype=float)
    if p.shape != (ps.dim,):
        raise DimensionMismatch(f"point has shape {p.shape}, data dimension is {ps.dim}")
    return float(evaluate_many(ps, p[None, :], metric)[0])


def tau(p, x) -> np.ndarray:
    """Unit tangent at ``p`` pointing towards ``x``: (I - pp^T)x / |(I - pp^T)x|."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if p.shape != x.shape:
        raise DimensionMismatch(f"dimension mismatch: {p.shape} vs {x.shape}")
    g = float(p @ x)
    if abs(g) > 1.0 - POLE_TOL:
        raise PoleSingularity("tau_p(x) is undefined for x = +-p")
    return (x - g * p) / float(wedge_norm(p, x))


def riemannian_gradient(ps: WeightedPointSet, p, metric: str = "sine") -> np.ndarray:
    """Tangential gradient of J at ``p`` (a vector orthogonal to ``p``).

    Sine metric: -(I - pp^T) sum_i w_i (v_i.p) v_i / sqrt(1 - (v_i.p)^2).
    Angular metric: the same with (v_i.p) replaced by sign(v_i.p); the
    subgradient at v_i.p = 0 is taken to be zero.
    """
    _check_metric(metric)
    p = np.asarray(p, dtype=float)
    if p.shape != (ps.dim,):
        raise DimensionMismatch(f"point has shape {p.shape}, data dimension is {ps.dim}")
    g = ps.points @ p
    if np.any(np.abs(g) > 1.0 - POLE_TOL):
        raise PoleSingularity("gradient is undefined on a data line")
    y = wedge_norm(ps.points, p[None, :])
    coef = g if metric == "sine" else np.sign(g)
    euclid = -((ps.weights * coef / y) @ ps.points)
    return euclid - (euclid @ p) * p


def stationarity_residual(ps: WeightedPointSet, p, metric: str = "sine") -> float:
    return float(np.linalg.norm(riemannian_gradient(ps, p, metric)))


def phi_from_alpha(alpha: float) -> float:
    """Angle of the equiangular triple mu(alpha,1,1), mu(1,alpha,1), mu(1,1,alpha).

    cos(phi) = (1 + 2 alpha) / (2 + alpha^2); evaluated through the half
    angle, sin(phi/2) = (alpha - 1) / sqrt(2 (2 + alpha^2)), to stay accurate
    as alpha -> 1.
    """
    if not alpha > 1.0:
        raise ValueError(f"alpha must exceed 1, got {alpha!r}")
    if math.isinf(alpha):
        return math.pi / 2
    return 2.0 * math.asin((alpha - 1.0) / math.sqrt(2.0 * (2.0 + alpha * alpha)))


def alpha_from_phi(phi: float) -> float:
    """Inverse of :func:`phi_from_alpha` on (0, pi/2), the larger root."""
    if not 0.0 < phi < math.pi / 2:
        raise ValueError(f"phi must lie in (0, pi/2), got {phi!r}")
    c = math.cos(phi)
    s = 1.0 / c
    s_minus_1 = 2.0 * math.sin(phi / 2) ** 2 / c
    return s + math.sqrt(s_minus_1 * (s + 2.0))


def equilateral_lines(alpha: float) -> np.ndarray:
    """Rows a, b, c of the symmetric equiangular parametrization."""
    mu = 1.0 / math.sqrt(2.0 + alpha * alpha)
    return mu * np.array([[alpha, 1.0, 1.0], [1.0, alpha, 1.0], [1.0, 1.0, alpha]])


def reduced_point(w: float) -> np.ndarray:
    """(1, 1, w) / sqrt(2 + w^2): points equidistant from a and b."""
    return np.array([1.0, 1.0, w]) / math.sqrt(2.0 + w * w)


def u_quantity(alpha, w):
    """(2 + w^2)(2 + alpha^2) - (1 + alpha + w)^2."""
    return (2 + w * w) * (2 + alpha * alpha) - (1 + alpha + w) ** 2


def u_squares(alpha, w):
    """Sum-of-squares form of :func:`u_quantity`."""
    return (alpha - 1) ** 2 + (w - 1) ** 2 + (alpha * w - 1) ** 2


def reduced_J(alpha: float, w: Union[float, np.ndarray]):
    """Objective of the equiangular triple restricted to p = (1,1,w)/|.|.

    w = alpha is the vertex c and w = 1 the centroid e. Accepts arrays of w.
    """
    w = np.asarray(w, dtype=float)
    u = u_squares(alpha, w)
    out = (2.0 * np.sqrt(u) + math.sqrt(2.0) * np.abs(alpha - w)) / np.sqrt((2.0 + w * w) * (2.0 + alpha * alpha))
    return float(out) if out.ndim == 0 else out
