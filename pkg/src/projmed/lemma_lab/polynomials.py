"""Polynomial machinery of the equiangular case.

Everything here is plain polynomial arithmetic, so the same functions
accept floats, numpy arrays (vectorized over samples) or Python ints
(exact evaluation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from ..errors import IdentityViolation
from ..objective import reduced_J

REL_TOL = 1e-9


@dataclass(frozen=True)
class EquilateralState:
    """Inner products x_i = v_i.p, y_i = sqrt(1 - x_i^2) and z = cos(phi)."""
    x1: float
    x2: float
    x3: float
    y1: float
    y2: float
    y3: float
    z: float

    @classmethod
    def measure(cls, lines: np.ndarray, p: np.ndarray) -> "EquilateralState":
        lines = np.asarray(lines, dtype=float)
        x = lines @ np.asarray(p, dtype=float)
        y = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
        z = float(lines[0] @ lines[1])
        return cls(*map(float, x), *map(float, y), z)

    def as_tuple(self) -> Tuple[float, ...]:
        return (self.x1, self.x2, self.x3, self.y1, self.y2, self.y3, self.z)

    def check(self, tol: float = 1e-12) -> bool:
        xs, ys = (self.x1, self.x2, self.x3), (self.y1, self.y2, self.y3)
        return (all(abs(x * x + y * y - 1.0) <= tol for x, y in zip(xs, ys))
                and all(y >= 0 for y in ys) and 0.0 < self.z < 1.0)


def generators(X1, X2, X3, Y1, Y2, Y3, Z):
    """The six generators F1..F6 of the stationarity ideal."""
    F1 = X1 * Y1 * Y2 * Y3 + X2 * Y3 * (Z - X1 * X2) + X3 * Y2 * (Z - X1 * X3)
    F2 = X1 * Y3 * (Z - X1 * X2) + X2 * Y1 * Y2 * Y3 + X3 * Y1 * (Z - X2 * X3)
    F3 = X1 * Y2 * (Z - X1 * X3) + X2 * Y1 * (Z - X2 * X3) + X3 * Y1 * Y2 * Y3
    F4 = X1 * X1 + Y1 * Y1 - 1
    F5 = X2 * X2 + Y2 * Y2 - 1
    F6 = X3 * X3 + Y3 * Y3 - 1
    return F1, F2, F3, F4, F5, F6


def target(Y1, Y2, Y3, Z):
    """F = (1 - Z)(Y1 - Y2)(Y2 - Y3)(Y3 - Y1)(Y1 + Y2 + Y3)."""
    return (1 - Z) * (Y1 - Y2) * (Y2 - Y3) * (Y3 - Y1) * (Y1 + Y2 + Y3)


def eval_F_system(s: EquilateralState) -> Tuple[float, ...]:
    """(F1, ..., F6, F) at the state."""
    X1, X2, X3, Y1, Y2, Y3, Z = s.as_tuple()
    return (*generators(X1, X2, X3, Y1, Y2, Y3, Z), target(Y1, Y2, Y3, Z))


# Each link returns (lhs, rhs, scale): lhs == rhs as polynomials, and
# scale bounds the size of the summed terms for a relative residual.

def _cubic_corrections(Y1, Y2, Y3, Z):
    B1 = Y2 ** 3 * Y3 * (Z - 1) + Y2 * Y3 ** 3 * (1 - Z)
    B2 = Y1 ** 3 * Y3 * (1 - Z) + Y1 * Y3 ** 3 * (Z - 1)
    B3 = Y1 ** 3 * Y2 * (Z - 1) + Y1 * Y2 ** 3 * (1 - Z)
    return B1, B2, B3


def link_expanded(X1, X2, X3, Y1, Y2, Y3, Z):
    """Product form of F against its monomial expansion."""
    lhs = target(Y1, Y2, Y3, Z)
    terms = (Y1 ** 3 * Y2 * (Z - 1), Y1 * Y2 ** 3 * (1 - Z), Y1 ** 3 * Y3 * (1 - Z),
             Y2 ** 3 * Y3 * (Z - 1), Y1 * Y3 ** 3 * (Z - 1), Y2 * Y3 ** 3 * (1 - Z))
    return lhs, sum(terms), sum(abs(t) for t in terms)


def _f_prime(X1, X2, X3, Y1, Y2, Y3, Z):
    _, _, _, F4, F5, F6 = generators(X1, X2, X3, Y1, Y2, Y3, Z)
    B1, B2, B3 = _cubic_corrections(Y1, Y2, Y3, Z)
    terms = (F4 * B1, F5 * B2, F6 * B3, target(Y1, Y2, Y3, Z))
    return sum(terms), sum(abs(t) for t in terms)


def _f_triple_prime(X1, X2, X3, Y1, Y2, Y3):
    terms = ((X1 ** 2 + Y1 ** 2) * Y2 * Y3 * (X3 ** 2 - X2 ** 2),
             (X2 ** 2 + Y2 ** 2) * Y1 * Y3 * (X1 ** 2 - X3 ** 2),
             (X3 ** 2 + Y3 ** 2) * Y1 * Y2 * (X2 ** 2 - X1 ** 2))
    return sum(terms), sum(abs(t) for t in terms)


def _f_quad_prime(X1, X2, X3, Y1, Y2, Y3):
    terms = (X1 * X2 * Y3 * (Y1 - Y2), X1 * X3 * Y2 * (Y3 - Y1), X2 * X3 * Y1 * (Y2 - Y3))
    return sum(terms), sum(abs(t) for t in terms)


def link_cube_reduction(X1, X2, X3, Y1, Y2, Y3, Z):
    """F' - F'' is the explicit combination of F4, F5, F6 left by Y^3 -> Y(1 - X^2)."""
    _, _, _, F4, F5, F6 = generators(X1, X2, X3, Y1, Y2, Y3, Z)
    fp, sp = _f_prime(X1, X2, X3, Y1, Y2, Y3, Z)
    f3, s3 = _f_triple_prime(X1, X2, X3, Y1, Y2, Y3)
    terms = ((X1 ** 2 + Y1 ** 2) * Y2 * Y3 * (F5 - F6),
             (X2 ** 2 + Y2 ** 2) * Y1 * Y3 * (F6 - F4),
             (X3 ** 2 + Y3 ** 2) * Y1 * Y2 * (F4 - F5))
    d = (Z - 1) * sum(terms)
    scale = sp + abs(Z - 1) * (s3 + sum(abs(t) for t in terms))
    return fp - (Z - 1) * f3, d, scale


def link_third(X1, X2, X3, Y1, Y2, Y3, Z):
    """F''' + X1(Y3-Y2)F1 + X2(Y1-Y3)F2 + X3(Y2-Y1)F3 = Z F''''."""
    F1, F2, F3, *_ = generators(X1, X2, X3, Y1, Y2, Y3, Z)
    f3, s3 = _f_triple_prime(X1, X2, X3, Y1, Y2, Y3)
    f4, s4 = _f_quad_prime(X1, X2, X3, Y1, Y2, Y3)
    terms = (X1 * (Y3 - Y2) * F1, X2 * (Y1 - Y3) * F2, X3 * (Y2 - Y1) * F3)
    return f3 + sum(terms), Z * f4, s3 + sum(abs(t) for t in terms) + abs(Z) * s4


def _fourth_combination(X1, X2, X3, Y1, Y2, Y3, Z):
    F1, F2, F3, F4, F5, F6 = generators(X1, X2, X3, Y1, Y2, Y3, Z)
    terms = (Y1 * (X2 - X3) * F1, Y2 * (X3 - X1) * F2, Y3 * (X1 - X2) * F3,
             X1 * Y2 * Y3 * (X3 - X2) * F4, X2 * Y1 * Y3 * (X1 - X3) * F5,
             X3 * Y1 * Y2 * (X2 - X1) * F6)
    return sum(terms), sum(abs(t) for t in terms)


def link_fourth(X1, X2, X3, Y1, Y2, Y3, Z):
    """(Z - 1) F'''' as an explicit combination of F1..F6."""
    f4, s4 = _f_quad_prime(X1, X2, X3, Y1, Y2, Y3)
    comb, sc = _fourth_combination(X1, X2, X3, Y1, Y2, Y3, Z)
    return (Z - 1) * f4, comb, abs(Z - 1) * s4 + sc


def link_flattened(X1, X2, X3, Y1, Y2, Y3, Z):
    """F written directly as sum_i C_i F_i by chaining the links above."""
    F1, F2, F3, F4, F5, F6 = generators(X1, X2, X3, Y1, Y2, Y3, Z)
    B1, B2, B3 = _cubic_corrections(Y1, Y2, Y3, Z)
    comb, _ = _fourth_combination(X1, X2, X3, Y1, Y2, Y3, Z)
    d = link_cube_reduction(X1, X2, X3, Y1, Y2, Y3, Z)[1]
    terms = (Z * comb,
             -(Z - 1) * (X1 * (Y3 - Y2) * F1 + X2 * (Y1 - Y3) * F2 + X3 * (Y2 - Y1) * F3),
             d, -F4 * B1, -F5 * B2, -F6 * B3)
    lhs = target(Y1, Y2, Y3, Z)
    return lhs, sum(terms), abs(lhs) + sum(abs(t) for t in terms)


IDEAL_LINKS: Dict[str, Callable] = {
    "F_expansion": link_expanded,
    "cube_reduction": link_cube_reduction,
    "third_link": link_third,
    "fourth_link": link_fourth,
    "flattened_membership": link_flattened,
}


def relative_residual(lhs, rhs, scale):
    """|lhs - rhs| / max(scale, 1); exact zero for exact (integer) inputs."""
    diff = abs(lhs - rhs)
    if isinstance(diff, int):
        return float(diff)
    return diff / np.maximum(scale, 1.0)


def sample_ring_points(rng: np.random.Generator, trials: int, bound: float = 2.0) -> np.ndarray:
    """Uniform random points of the 7-variable space, one per row."""
    return rng.uniform(-bound, bound, size=(trials, 7))


def link_residuals(points: np.ndarray) -> Dict[str, np.ndarray]:
    cols = tuple(points.T)
    return {name: np.asarray(relative_residual(*fn(*cols))) for name, fn in IDEAL_LINKS.items()}


def link_residuals_exact(point: Sequence[int]) -> Dict[str, float]:
    """Integer evaluation: every residual is exactly 0 when the identities hold."""
    pt = tuple(int(v) for v in point)
    return {name: relative_residual(*fn(*pt)) for name, fn in IDEAL_LINKS.items()}


class PChain(NamedTuple):
    p1: float
    p2: float
    p3: float
    disc_p3: float


class QChain(NamedTuple):
    q1: float
    q2: float
    q3: float
    q4: float
    disc_q4: float


def u_of(alpha, w):
    return (2 + w * w) * (2 + alpha * alpha) - (1 + alpha + w) ** 2


def p3_coefficients(alpha):
    a = alpha
    return (8 * a ** 6 - 9 * a ** 4 - 112 * a ** 3 + 32,
            -30 * a ** 5 - 88 * a ** 4 + 40 * a ** 3 + 240 * a ** 2 + 64 * a - 64,
            7 * a ** 6 - 24 * a ** 5 + 64 * a ** 4 + 48 * a ** 3 + 48 * a ** 2 - 256 * a + 32)


def q4_coefficients(alpha):
    a = alpha
    return (a ** 4 - 8 * a ** 3 + 20 * a ** 2 + 8,
            -2 * a ** 4 + 8 * a ** 3 - 32 * a ** 2 - 16 * a,
            5 * a ** 4 - 8 * a ** 3 + 24 * a ** 2)


def disc_p3_closed(alpha):
    a = alpha
    return (-32 * a * (a - 4) * (a - 1) ** 2 * (a * a + 2) ** 2
            * (a * a + 2 * a + 3) * (7 * a * a + 4 * a + 16))


def disc_q4_closed(alpha):
    a = alpha
    return -16 * a * a * (a - 4) ** 2 * (a - 1) ** 2 * (a * a + 2)


def quadratic_discriminant(coeffs):
    A, B, C = coeffs
    return B * B - 4 * A * C


def _quad(coeffs, w):
    A, B, C = coeffs
    return (A * w + B) * w + C


def _require(name: str, lhs, rhs, scale, tol: float = REL_TOL) -> float:
    res = float(relative_residual(lhs, rhs, scale))
    if res > tol:
        raise IdentityViolation(f"{name}: relative residual {res:.3e} exceeds {tol:.0e}")
    return res


def p_chain(alpha, w, check: bool = True) -> PChain:
    """p1, p2 and the factor p3 of p2 = 4 (w - alpha)^2 p3, with disc(p3)."""
    a = alpha
    u = u_of(a, w)
    k = 2 + a * a
    p1 = 4 * (2 + w * w) * (k * k - (1 + 2 * a) ** 2) - k * (4 * u + 2 * (a - w) ** 2)
    lead = 32 * u * (a - w) ** 2 * k * k
    p2 = lead - p1 * p1
    p3 = _quad(p3_coefficients(a), w)
    if check:
        rhs = 4 * (w - a) ** 2 * p3
        _require("p2 factorization", p2, rhs, abs(lead) + p1 * p1 + abs(rhs))
    return PChain(p1, p2, p3, disc_p3_closed(a))


def q_chain(alpha, w, check: bool = True) -> QChain:
    """q1..q3 and the factor q4 of q3 = 4 (w - 1)^2 q4, with disc(q4)."""
    a = alpha
    u = u_of(a, w)
    q1 = 6 * (2 + w * w) * (a - 1) ** 2 - (4 * u + 2 * (a - w) ** 2)
    lead = 32 * u * (a - w) ** 2
    q2 = lead - q1 * q1
    corr = 4 * a * (4 - a) * (w - 1) ** 2 * q1
    q3 = q2 - corr
    q4 = _quad(q4_coefficients(a), w)
    if check:
        rhs = 4 * (w - 1) ** 2 * q4
        _require("q3 factorization", q3, rhs, abs(lead) + q1 * q1 + abs(corr) + abs(rhs))
    return QChain(q1, q2, q3, q4, disc_q4_closed(a))


def p2_at_four(w):
    """(p2 at alpha = 4, 93312 (w - 4)^2 (w - 1)^2, scale)."""
    p2 = p_chain(4, w, check=False).p2
    rhs = 93312 * (w - 4) ** 2 * (w - 1) ** 2
    u = u_of(4, w)
    return p2, rhs, abs(32 * u * (4 - w) ** 2 * 324) + abs(rhs) + abs(p2)


def u_identity(alpha, w):
    """(product form, sum-of-squares form, scale) of u."""
    lhs = u_of(alpha, w)
    terms = ((alpha - 1) ** 2, (w - 1) ** 2, (alpha * w - 1) ** 2)
    return lhs, sum(terms), (2 + w * w) * (2 + alpha * alpha) + (1 + alpha + w) ** 2


def reduced_argmin(alpha: float, step: float = 1e-3, lo: float = -20.0, hi: float = None,
                   tie_tol: float = 1e-12) -> List[float]:
    """Minimizers of the reduced objective over a w-grid.

    The grid has spacing ``step`` and additionally contains the two special
    nodes w = 1 (centroid) and w = alpha (vertex), where the kink of J makes
    an off-node grid useless near alpha = 4. Grid points within ``tie_tol``
    of the minimum are grouped into clusters; one representative (the best
    point) is returned per cluster.
    """
    if hi is None:
        hi = max(20.0, alpha + 5.0)
    n = int(math.floor((hi - lo) / step)) + 1
    w = np.union1d(lo + step * np.arange(n), [1.0, alpha])
    j = reduced_J(alpha, w)
    near = np.flatnonzero(j <= j.min() + tie_tol)
    clusters: List[List[int]] = []
    for i in near:
        if clusters and w[i] - w[clusters[-1][-1]] <= 1.5 * step:
            clusters[-1].append(int(i))
        else:
            clusters.append([int(i)])
    return [float(w[min(c, key=lambda k: j[k])]) for c in clusters]
