"""Auxiliary points used to compare a triangle with nearby easier ones.

Two canonical frames are used. The isosceles frame puts the equal-angle
vertex c on the xz-plane above the bisector e_x of a and b; the general
frame puts a on the z-axis and b in the xz-plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..core import ANGLE_TOL, ProjectiveTriangle
from ..errors import HypothesisViolation

SIXTY = math.pi / 3
RIGHT = math.pi / 2
E_X = np.array([1.0, 0.0, 0.0])


def arc_point(psi: float) -> np.ndarray:
    """g(psi) = (cos psi, 0, sin psi), the arc from e_x towards c."""
    return np.array([math.cos(psi), 0.0, math.sin(psi)])


@dataclass(frozen=True)
class IsoscelesFrame:
    phi_ab: float
    phi_ac: float
    half: float        # half of phi_ab: a, b sit at +-half around e_x
    beta: float        # elevation of c above the plane of a, b
    beta_star: float   # elevation of c*
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def c_star(self) -> np.ndarray:
        return arc_point(self.beta_star)

    @property
    def lines(self) -> np.ndarray:
        return np.vstack([self.a, self.b, self.c])


def isosceles_frame(phi_ab: float, phi_ac: float, tol: float = ANGLE_TOL) -> IsoscelesFrame:
    """Canonical coordinates for 60 deg <= phi_ab <= phi_ac = phi_bc < 90 deg."""
    if not (SIXTY - tol <= phi_ab <= phi_ac + tol):
        raise HypothesisViolation("need 60 deg <= phi_ab <= phi_ac")
    if not phi_ac < RIGHT - tol:
        raise HypothesisViolation("need phi_ac < 90 deg")
    phi_ab = min(phi_ab, phi_ac)
    half = phi_ab / 2.0
    ch = math.cos(half)
    beta = math.acos(min(1.0, math.cos(phi_ac) / ch))
    beta_star = math.acos(min(1.0, math.cos(phi_ab) / ch))
    a = np.array([ch, math.sin(half), 0.0])
    b = np.array([ch, -math.sin(half), 0.0])
    return IsoscelesFrame(phi_ab, phi_ac, half, beta, beta_star, a, b, arc_point(beta))


def _as_frame(t: Union[IsoscelesFrame, ProjectiveTriangle], tol: float) -> IsoscelesFrame:
    if isinstance(t, IsoscelesFrame):
        return t
    if abs(t.phi_bc - t.phi_ac) > tol:
        raise HypothesisViolation("triangle is not isosceles with phi_ac = phi_bc")
    return isosceles_frame(t.phi_ab, t.phi_ac, tol)


def construct_c_star(t: Union[IsoscelesFrame, ProjectiveTriangle], tol: float = ANGLE_TOL) -> np.ndarray:
    """Point of the arc c..e_x at angle phi_ab from both a and b."""
    return _as_frame(t, tol).c_star


def in_spherical_triangle(p: np.ndarray, v1: np.ndarray, v2: np.ndarray, v3: np.ndarray,
                          tol: float = 1e-12) -> bool:
    """p is on the same side of each edge plane as the opposite vertex."""
    for x, y, z in ((v1, v2, v3), (v2, v3, v1), (v3, v1, v2)):
        n = np.cross(x, y)
        if (n @ z) * (n @ p) < -tol:
            return False
    return True


def beta_prime(frame: IsoscelesFrame, p: np.ndarray) -> float:
    """Root of f(psi) = (p_x sin h - p_y cos h) sin psi - p_z sin h cos psi.

    f(psi) = (a x g(psi)).p, so g(beta') is where the great circle through
    a and p meets the arc c..e_x. At p = a both coefficients vanish and the
    root is taken to be 0, which makes c_p = c*.
    """
    s, c = math.sin(frame.half), math.cos(frame.half)
    return math.atan2(p[2] * s, p[0] * s - p[1] * c)


def f_slope(frame: IsoscelesFrame, p: np.ndarray) -> float:
    return p[0] * math.sin(frame.half) - p[1] * math.cos(frame.half)


def f_value(frame: IsoscelesFrame, p: np.ndarray, psi: float) -> float:
    return f_slope(frame, p) * math.sin(psi) - p[2] * math.sin(frame.half) * math.cos(psi)


def construct_c_p(frame: IsoscelesFrame, p: np.ndarray, tol: float = 1e-12) -> Tuple[np.ndarray, float, float]:
    """(c_p, beta_p, beta') for p in the spherical triangle a, c, e_x."""
    p = np.asarray(p, dtype=float)
    if not in_spherical_triangle(p, frame.a, frame.c, E_X, tol):
        raise HypothesisViolation("p is outside the spherical triangle a, c, e_x")
    bp = beta_prime(frame, p)
    beta_p = max(bp, frame.beta_star)
    return arc_point(beta_p), beta_p, bp


@dataclass(frozen=True)
class GeneralFrame:
    phi_ab: float
    phi_ac: float
    phi_bc: float
    alpha: float
    alpha_prime: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    b_prime: np.ndarray
    c_prime: np.ndarray

    @property
    def lines(self) -> np.ndarray:
        return np.vstack([self.a, self.b, self.c])


def _azimuth_point(phi: float, theta: float) -> np.ndarray:
    return np.array([math.sin(phi) * math.cos(theta), math.sin(phi) * math.sin(theta), math.cos(phi)])


def construct_b_prime_c_prime(t: Union[ProjectiveTriangle, Tuple[float, float, float]],
                              tol: float = ANGLE_TOL) -> GeneralFrame:
    """b' and c' for 60 deg <= phi_ab <= phi_ac < phi_bc, non-big.

    c' is c rotated about a down to azimuth alpha' so that it is equidistant
    from a and b; b' is b rotated up to azimuth alpha - alpha' so that
    phi_ab'c = phi_ac.
    """
    if isinstance(t, ProjectiveTriangle):
        if t.big:
            raise HypothesisViolation("big triangles are handled by vertex comparison")
        phi_ab, phi_ac, phi_bc = t.phi_ab, t.phi_ac, t.phi_bc
    else:
        phi_ab, phi_ac, phi_bc = t
    if not (SIXTY - tol <= phi_ab <= phi_ac + tol and phi_ac < phi_bc and phi_bc <= RIGHT):
        raise HypothesisViolation("need 60 deg <= phi_ab <= phi_ac < phi_bc <= 90 deg")
    s_ab, s_ac = math.sin(phi_ab), math.sin(phi_ac)
    c_ab, c_ac, c_bc = math.cos(phi_ab), math.cos(phi_ac), math.cos(phi_bc)
    cos_alpha = (c_bc - c_ab * c_ac) / (s_ab * s_ac)
    cos_alpha_p = (c_ac - c_ab * c_ac) / (s_ab * s_ac)
    if abs(cos_alpha) > 1.0:
        raise HypothesisViolation("angles are not realizable")
    alpha = math.acos(cos_alpha)
    alpha_p = math.acos(cos_alpha_p)
    a = np.array([0.0, 0.0, 1.0])
    b = _azimuth_point(phi_ab, 0.0)
    c = _azimuth_point(phi_ac, alpha)
    return GeneralFrame(phi_ab, phi_ac, phi_bc, alpha, alpha_p, a, b, c,
                        _azimuth_point(phi_ab, alpha - alpha_p), _azimuth_point(phi_ac, alpha_p))
