"""Closed-form minimizer sets for the three-point problem.

Equilateral triangles switch from the centroid to the vertices at 60 deg.
Triangles whose smallest side is at least 60 deg are solved at a vertex.
Big triangles only admit vertex minimizers, so comparing the vertex values
is exact. Anything else is reported as ``NotCovered``; no guess is made.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .core import ANGLE_TOL, ProjectiveTriangle, centroid, is_big, sine_distance
from .objective import WeightedPointSet, evaluate

SIXTY = math.pi / 3
VALUE_TIE_TOL = 1e-9


class Coverage(str, enum.Enum):
    THEOREM1_1 = "Theorem1_1"
    THEOREM1_2 = "Theorem1_2"
    THEOREM1_3A = "Theorem1_3a"
    THEOREM1_3B = "Theorem1_3b"
    THEOREM1_3C = "Theorem1_3c"
    BIG_TRIANGLE = "BigTriangle"
    NOT_COVERED = "NotCovered"


@dataclass
class SolutionSet:
    members: List[Tuple[str, np.ndarray]]
    coverage: Coverage
    values: List[float] = field(default_factory=list)

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.members]

    @property
    def covered(self) -> bool:
        return self.coverage is not Coverage.NOT_COVERED

    def to_dict(self) -> dict:
        return {
            "coverage": self.coverage.value,
            "members": [
                {"label": label, "point": pt.tolist(), "value": val}
                for (label, pt), val in zip(self.members, self.values)
            ],
        }


def triangle_point_set(t: ProjectiveTriangle) -> WeightedPointSet:
    return WeightedPointSet(t.vertices, np.ones(3))


def vertex_objective_table(t: ProjectiveTriangle) -> Tuple[float, float, float]:
    """(J(A), J(B), J(C)); J(A) = sin phi_ab + sin phi_ac and so on."""
    s_ab = sine_distance(t.a, t.b)
    s_ac = sine_distance(t.a, t.c)
    s_bc = sine_distance(t.b, t.c)
    return s_ab + s_ac, s_ab + s_bc, s_ac + s_bc


def centroid_value(t: ProjectiveTriangle) -> float:
    return evaluate(triangle_point_set(t), centroid(t))


def _vertices(t: ProjectiveTriangle, labels: str) -> List[Tuple[str, np.ndarray]]:
    pts = {"A": t.a, "B": t.b, "C": t.c}
    return [(k, pts[k].copy()) for k in labels]


def classify(t: ProjectiveTriangle, tol: float = ANGLE_TOL) -> SolutionSet:
    """Minimizer set of J_ABC where it is known exactly.

    ``tol`` is the angle-equality tolerance in radians. Labels follow the
    sorted order phi_ab <= phi_ac <= phi_bc of ``t``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    table = vertex_objective_table(t)

    if t.is_equilateral(tol):
        phi = (t.phi_ab + t.phi_ac + t.phi_bc) / 3.0
        if phi > SIXTY + tol:
            members, cov = _vertices(t, "ABC"), Coverage.THEOREM1_3A
        elif phi >= SIXTY - tol:
            members, cov = _vertices(t, "ABC") + [("E", centroid(t))], Coverage.THEOREM1_3B
        else:
            members, cov = [("E", centroid(t))], Coverage.THEOREM1_3C
    elif t.phi_ab >= SIXTY - tol:
        if t.phi_bc - t.phi_ac <= tol:
            members, cov = _vertices(t, "AB"), Coverage.THEOREM1_2
        else:
            members, cov = _vertices(t, "A"), Coverage.THEOREM1_1
    elif is_big(t):
        best = min(table)
        labels = "".join(k for k, v in zip("ABC", table) if v - best <= VALUE_TIE_TOL)
        members, cov = _vertices(t, labels), Coverage.BIG_TRIANGLE
    else:
        return SolutionSet([], Coverage.NOT_COVERED, [])

    ps = triangle_point_set(t)
    values = [table["ABC".index(k)] if k in "ABC" else evaluate(ps, p) for k, p in members]
    return SolutionSet(members, cov, values)
