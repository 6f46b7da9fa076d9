"""Points and triangles of real projective space, stored as unit vectors.

A projective point is a line through the origin; we carry one of its two
unit representatives around and make every quantity sign-invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    BigTriangleError,
    DegenerateTriangle,
    DimensionMismatch,
    InfeasibleConstraint,
    NotUnitVector,
    PointFileError,
    UnrealizableAngles,
)

UNIT_TOL = 1e-12
DET_TOL = 1e-10
SAME_LINE_TOL = 1e-9
ANGLE_TOL = 1e-9
PHYSICAL_ANGLE_TOL = 1e-6

ArrayLike = Union[Sequence[float], np.ndarray]


def as_unit(x: ArrayLike, normalize: bool = False) -> np.ndarray:
    """Return ``x`` as a float64 unit vector.

    With ``normalize=True`` any nonzero vector is scaled to norm one,
    otherwise the norm must already be 1 within ``UNIT_TOL``.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise DimensionMismatch(f"expected a vector with at least 2 coordinates, got shape {v.shape}")
    nrm = float(np.linalg.norm(v))
    if normalize:
        if not np.isfinite(nrm) or nrm == 0.0:
            raise NotUnitVector("cannot normalize the zero vector")
        return v / nrm
    if abs(nrm - 1.0) > UNIT_TOL:
        raise NotUnitVector(f"norm is {nrm!r}, not 1")
    return v


def wedge_norm(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Norm of the wedge product p ^ q, broadcasting over leading axes.

    For unit vectors this is the sine of the angle between them. Summing the
    squared 2x2 minors avoids the cancellation in sqrt(1 - (p.q)^2) and gives
    exactly zero for q = +-p.
    """
    d = p.shape[-1]
    i, j = np.triu_indices(d, k=1)
    minors = p[..., i] * q[..., j] - p[..., j] * q[..., i]
    return np.sqrt(np.einsum("...k,...k->...", minors, minors))


def _check_pair(p: ArrayLike, q: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    p, q = as_unit(p), as_unit(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"dimension mismatch: {p.shape} vs {q.shape}")
    return p, q


def sine_distance(p: ArrayLike, q: ArrayLike) -> float:
    """Sine of the angle between the lines spanned by ``p`` and ``q``."""
    p, q = _check_pair(p, q)
    return min(float(wedge_norm(p, q)), 1.0)


def angular_distance(p: ArrayLike, q: ArrayLike) -> float:
    """Smallest angle between the lines through ``p`` and ``q``, in [0, pi/2]."""
    p, q = _check_pair(p, q)
    return float(math.atan2(float(wedge_norm(p, q)), abs(float(p @ q))))


def sine_distances(points: np.ndarray, lines: np.ndarray) -> np.ndarray:
    """Matrix of sine distances, shape (len(points), len(lines))."""
    points = np.atleast_2d(points)
    lines = np.atleast_2d(lines)
    if points.shape[1] != lines.shape[1]:
        raise DimensionMismatch(f"dimension mismatch: {points.shape[1]} vs {lines.shape[1]}")
    return np.minimum(wedge_norm(points[:, None, :], lines[None, :, :]), 1.0)


def angular_distances(points: np.ndarray, lines: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(points)
    lines = np.atleast_2d(lines)
    if points.shape[1] != lines.shape[1]:
        raise DimensionMismatch(f"dimension mismatch: {points.shape[1]} vs {lines.shape[1]}")
    s = wedge_norm(points[:, None, :], lines[None, :, :])
    return np.arctan2(s, np.abs(points @ lines.T))


def same_line(p: ArrayLike, q: ArrayLike, tol: float = SAME_LINE_TOL) -> bool:
    p, q = _check_pair(p, q)
    return min(np.linalg.norm(p - q), np.linalg.norm(p + q)) < tol


class AngleTriple(NamedTuple):
    smallest: float
    middle: float
    largest: float

    @classmethod
    def of(cls, angles: Iterable[float]) -> "AngleTriple":
        vals = sorted(float(x) for x in angles)
        if len(vals) != 3:
            raise ValueError("an angle triple has exactly three entries")
        for x in vals:
            if not (0.0 < x <= math.pi / 2 + 1e-15):
                if x <= 0.0:
                    raise DegenerateTriangle(f"angle {x!r} is not positive")
                raise UnrealizableAngles(f"angle {x!r} exceeds pi/2")
        return cls(*vals)

    def degrees(self) -> tuple[float, float, float]:
        return tuple(math.degrees(x) for x in self)


@dataclass(frozen=True)
class ProjectiveTriangle:
    """Three lines of R^3 labelled so that phi_ab <= phi_ac <= phi_bc.

    ``vertex_order[k]`` is the input index of the line labelled A, B, C.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    phi_ab: float
    phi_ac: float
    phi_bc: float
    vertex_order: tuple[int, int, int] = (0, 1, 2)

    @property
    def vertices(self) -> np.ndarray:
        return np.vstack([self.a, self.b, self.c])

    @property
    def angles(self) -> AngleTriple:
        return AngleTriple(self.phi_ab, self.phi_ac, self.phi_bc)

    @property
    def inner_products(self) -> tuple[float, float, float]:
        return float(self.a @ self.b), float(self.a @ self.c), float(self.b @ self.c)

    @property
    def big(self) -> bool:
        return is_big(self)

    def is_equilateral(self, tol: float = ANGLE_TOL) -> bool:
        return self.phi_bc - self.phi_ab <= tol


def _as_lines(lines: Iterable[ArrayLike]) -> np.ndarray:
    vs = [as_unit(v) for v in lines]
    if len(vs) != 3:
        raise ValueError("a triangle needs exactly three lines")
    if any(v.shape != (3,) for v in vs):
        raise DimensionMismatch("triangles live in the projective plane; lines must be in R^3")
    m = np.vstack(vs)
    if abs(np.linalg.det(m)) <= DET_TOL:
        raise DegenerateTriangle("the three lines are coplanar (collinear projective points)")
    return m


_SIGN_CLASSES = ((1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0))


def normalize_signs(lines: Iterable[ArrayLike]) -> ProjectiveTriangle:
    """Sort three lines into A, B, C and pick convenient representatives.

    A keeps its input sign. If some choice of signs for B and C makes all
    pairwise inner products nonnegative it is taken (the first one in a
    fixed order); otherwise the triangle is big and B, C are flipped so that
    a.b >= 0 and a.c >= 0.
    """
    m = _as_lines(lines)
    edges = ((0, 1), (0, 2), (1, 2))
    ang = [angular_distance(m[i], m[j]) for i, j in edges]
    order = sorted(range(3), key=lambda k: ang[k])  # stable: ties keep input order
    ab, bc = edges[order[0]], edges[order[2]]
    ib = (set(ab) & set(bc)).pop()
    ia = ab[0] if ab[1] == ib else ab[1]
    ic = bc[0] if bc[1] == ib else bc[1]

    a, b, c = m[ia], m[ib], m[ic]
    for sb, sc in _SIGN_CLASSES:
        if a @ (sb * b) >= 0 and a @ (sc * c) >= 0 and (sb * b) @ (sc * c) >= 0:
            b, c = sb * b, sc * c
            break
    else:
        if a @ b < 0:
            b = -b
        if a @ c < 0:
            c = -c
    phis = {edges[k]: ang[k] for k in range(3)}

    def phi(i: int, j: int) -> float:
        return phis[(min(i, j), max(i, j))]

    return ProjectiveTriangle(
        a=a.copy(), b=b.copy(), c=c.copy(),
        phi_ab=phi(ia, ib), phi_ac=phi(ia, ic), phi_bc=phi(ib, ic),
        vertex_order=(ia, ib, ic),
    )


def is_big(t: Union[ProjectiveTriangle, Iterable[ArrayLike]]) -> bool:
    """True iff (a.b)(b.c)(a.c) <= 0; the sign does not depend on representatives."""
    m = t.vertices if isinstance(t, ProjectiveTriangle) else np.asarray(list(t), dtype=float)
    return float((m[0] @ m[1]) * (m[1] @ m[2]) * (m[0] @ m[2])) <= 0.0


def _cos(x: float) -> float:
    # cos(pi/2) is 6e-17 in floating point; orthogonality must stay exact.
    return 0.0 if abs(x - math.pi / 2) < 4e-16 else math.cos(x)


def opening_cosine(phi_ab: float, phi_ac: float, phi_bc: float, big: bool = False) -> float:
    """cos of the dihedral opening between the planes (a, b) and (a, c).

    With a = e_z and b in the xz-plane this fixes the azimuth of c. For a big
    realization b.c is -cos(phi_bc) instead of +cos(phi_bc).
    """
    cbc = -_cos(phi_bc) if big else _cos(phi_bc)
    return (cbc - _cos(phi_ab) * _cos(phi_ac)) / (math.sin(phi_ab) * math.sin(phi_ac))


def triangle_from_angles(angles: Iterable[float], big: bool = False) -> ProjectiveTriangle:
    """Realize a triangle with the given pairwise angles (radians).

    Uses a = (0,0,1), b = (sin phi_ab, 0, cos phi_ab) and c at azimuth
    ``opening_cosine``. The default realization has all representatives at
    nonnegative inner products; ``big=True`` asks for b.c <= 0 instead.
    """
    t = AngleTriple.of(angles)
    cos_alpha = opening_cosine(*t, big=big)
    if abs(cos_alpha) > 1.0 + 1e-12:
        raise UnrealizableAngles(
            f"angles {tuple(round(d, 6) for d in t.degrees())} deg are not realizable "
            f"(cos alpha = {cos_alpha:.6g})"
        )
    if abs(cos_alpha) >= 1.0 - 1e-12:
        raise DegenerateTriangle("the requested angles force three coplanar lines")
    alpha = math.acos(cos_alpha)
    sab, sac = math.sin(t.smallest), math.sin(t.middle)
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([sab, 0.0, _cos(t.smallest)])
    c = np.array([sac * math.cos(alpha), sac * math.sin(alpha), _cos(t.middle)])
    return ProjectiveTriangle(a=a, b=b, c=c, phi_ab=t.smallest, phi_ac=t.middle, phi_bc=t.largest)


def triangle_from_degrees(d1: float, d2: float, d3: float, big: bool = False) -> ProjectiveTriangle:
    return triangle_from_angles(map(math.radians, (d1, d2, d3)), big=big)


def centroid(t: ProjectiveTriangle) -> np.ndarray:
    """Normalized a + b + c for representatives with nonnegative inner products."""
    if min(t.inner_products) < 0.0:
        raise BigTriangleError("the centroid is sign-ambiguous for a big triangle")
    s = t.a + t.b + t.c
    return s / np.linalg.norm(s)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_unit_vectors(rng: np.random.Generator, n: int, dim: int = 3) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_triangle(seed: int, constraint: Union[str, tuple] = "any",
                    max_tries: int = 100_000) -> ProjectiveTriangle:
    """Seeded random triangle.

    ``constraint`` is one of ``"any"``, ``"non_big"``, ``"big"``,
    ``("min_angle", theta)``, ``("equilateral", phi)`` or
    ``("isosceles", phi_ab, phi_ac)`` with angles in radians. The last two
    are built with :func:`triangle_from_angles` and then randomly rotated.
    """
    rng = np.random.default_rng(seed)
    kind, *params = (constraint,) if isinstance(constraint, str) else constraint

    if kind in ("equilateral", "isosceles"):
        angles = (params[0],) * 3 if kind == "equilateral" else (params[0], params[1], params[1])
        t = triangle_from_angles(angles)
        rot = random_rotation(rng)
        return ProjectiveTriangle(a=rot @ t.a, b=rot @ t.b, c=rot @ t.c,
                                  phi_ab=t.phi_ab, phi_ac=t.phi_ac, phi_bc=t.phi_bc)

    accept = {
        "any": lambda t: True,
        "non_big": lambda t: not t.big,
        "big": lambda t: t.big,
        "min_angle": lambda t: t.phi_ab >= params[0],
    }.get(kind)
    if accept is None:
        raise ValueError(f"unknown constraint {constraint!r}")
    for _ in range(max_tries):
        m = random_unit_vectors(rng, 3)
        if abs(np.linalg.det(m)) <= DET_TOL:
            continue
        t = normalize_signs(m)
        if accept(t):
            return t
    raise InfeasibleConstraint(f"no triangle satisfying {constraint!r} after {max_tries} draws")


def read_points(path: Union[str, Path]) -> np.ndarray:
    """Read a point file: one point per line, '#' comments, blank lines ignored.

    Rows are normalized to unit length; the dimension is set by the first row.
    """
    rows: list[list[float]] = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PointFileError(str(exc)) from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in s.split()]
        except ValueError as exc:
            raise PointFileError(f"{path}:{lineno}: {exc}") from exc
        if rows and len(row) != len(rows[0]):
            raise PointFileError(f"{path}:{lineno}: expected {len(rows[0])} coordinates, got {len(row)}")
        if not all(math.isfinite(x) for x in row):
            raise PointFileError(f"{path}:{lineno}: non-finite coordinate")
        rows.append(row)
    if not rows:
        raise PointFileError(f"{path}: no points")
    pts = np.array(rows, dtype=float)
    if pts.shape[1] < 2:
        raise PointFileError(f"{path}: points need at least 2 coordinates")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms == 0.0):
        raise PointFileError(f"{path}: the zero vector does not represent a projective point")
    return pts / norms[:, None]


def read_weights(path: Union[str, Path]) -> np.ndarray:
    vals: list[float] = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PointFileError(str(exc)) from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            w = float(s)
        except ValueError as exc:
            raise PointFileError(f"{path}:{lineno}: {exc}") from exc
        if not (w > 0 and math.isfinite(w)):
            raise PointFileError(f"{path}:{lineno}: weights must be positive and finite")
        vals.append(w)
    if not vals:
        raise PointFileError(f"{path}: no weights")
    return np.array(vals)
