"""Weighted medians of lines in projective space under the sine distance."""
from .classifier import Coverage, SolutionSet, classify
from .core import (AngleTriple, ProjectiveTriangle, angular_distance, normalize_signs, random_triangle,
                   sine_distance, triangle_from_angles, triangle_from_degrees)
from .errors import ProjmedError
from .objective import WeightedPointSet, evaluate, riemannian_gradient
from .oracle import CertifiedBound, certified_min, oracle_agrees, sampled_min
from .solver import SolverConfig, SolverResult, solve, solve_triangle

__all__ = [
    "AngleTriple", "CertifiedBound", "Coverage", "ProjectiveTriangle", "ProjmedError",
    "SolutionSet", "SolverConfig", "SolverResult", "WeightedPointSet", "angular_distance",
    "certified_min", "classify", "evaluate", "normalize_signs", "oracle_agrees",
    "random_triangle", "riemannian_gradient", "sampled_min", "sine_distance", "solve",
    "solve_triangle", "triangle_from_angles", "triangle_from_degrees",
]
