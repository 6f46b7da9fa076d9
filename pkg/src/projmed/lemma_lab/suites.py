"""Randomized regression suites for every intermediate claim of the proof.

Each section draws configurations that satisfy a claim's hypotheses and
evaluates its conclusion as a predicate. Claims about a minimizer p use the
certified oracle's argmin with an angular slack of three grid radii; claims
that a proof establishes for every p in a region cut out by earlier lemmas
(the usual "suppose p != a" contradiction set-up) are checked on points
sampled from that region, which is where they carry information.

Trials are independent and seeded from (seed, section, trial index), so a
report depends only on its arguments, never on scheduling.
"""
from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Iterable, List, Sequence

import numpy as np

from .._parallel import parallel_map
from ..classifier import triangle_point_set
from ..core import centroid, random_triangle, random_unit_vectors, sine_distance
from ..objective import WeightedPointSet, evaluate, riemannian_gradient, tau
from ..oracle import certified_min, projective_angle
from ..solver import SolverConfig, descend
from . import polynomials as poly
from .constructions import (E_X, arc_point, construct_b_prime_c_prime, construct_c_p,
                            f_slope, f_value, isosceles_frame)

SECTIONS = ("S2", "S3", "S4", "S5", "S6")
SUITE_GRID = 20_000
SUITE_REFINE = 30
SUITE_CANDIDATES = 4
SLACK_RADII = 3.0
EXACT = 0.0
ROUND = 1e-12
MEASURE = 1e-10

_SECTION_CODE = {name: i + 2 for i, name in enumerate(SECTIONS)}


@dataclass(frozen=True)
class IdentityReport:
    name: str
    trials: int
    max_abs_residual: float
    violations: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        verdict = "ok" if self.passed else "FAIL"
        return (f"{self.name:<34} trials={self.trials:<6d} max_residual={self.max_abs_residual:.3e} "
                f"tol={self.tolerance:.1e} violations={self.violations} {verdict}")


@dataclass(frozen=True)
class Observation:
    name: str
    residual: float
    ok: bool
    tolerance: float


class Checks:
    """Collects observations for one trial."""

    def __init__(self):
        self.items: List[Observation] = []

    def close(self, name: str, lhs: float, rhs: float, tol: float, scale: float = 1.0):
        res = abs(float(lhs) - float(rhs)) / max(float(scale), 1.0)
        self.items.append(Observation(name, res, res <= tol, tol))

    def residual(self, name: str, res: float, tol: float):
        res = float(res)
        self.items.append(Observation(name, res, res <= tol, tol))

    def at_most(self, name: str, small: float, big: float, slack: float = 0.0, strict: bool = False):
        """small <= big + slack (or small < big when strict and slack = 0)."""
        gap = float(small) - float(big)
        ok = gap < slack if strict else gap <= slack
        self.items.append(Observation(name, max(gap, 0.0), ok, slack))

    def holds(self, name: str, flag: bool, amount: float = 0.0):
        self.items.append(Observation(name, abs(float(amount)) if not flag else 0.0, bool(flag), 0.0))


def summarize(trial_obs: Iterable[Sequence[Observation]]) -> List[IdentityReport]:
    acc: "OrderedDict[str, list]" = OrderedDict()
    for obs in trial_obs:
        for o in obs:
            row = acc.setdefault(o.name, [0, 0.0, 0, o.tolerance])
            row[0] += 1
            row[1] = max(row[1], o.residual)
            row[2] += 0 if o.ok else 1
            row[3] = max(row[3], o.tolerance)
    return [IdentityReport(k, n, m, v, t) for k, (n, m, v, t) in acc.items()]


def trial_rng(seed: int, section: str, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), _SECTION_CODE[section], int(trial)]))


def _oracle(lines: np.ndarray):
    cb = certified_min(WeightedPointSet.of(lines), SUITE_GRID, SUITE_REFINE, SUITE_CANDIDATES)
    return cb, SLACK_RADII * cb.resolution


def _J(lines: np.ndarray, p: np.ndarray) -> float:
    return evaluate(WeightedPointSet.of(lines), p)


def _seed_int(rng: np.random.Generator) -> int:
    return int(rng.integers(2 ** 32))


# ---------------------------------------------------------------- S2

def _trial_s2(rng: np.random.Generator) -> List[Observation]:
    ck = Checks()
    v1, v2, v3 = random_unit_vectors(rng, 3)
    d = sine_distance
    ck.at_most("triangle_inequality", d(v1, v2), d(v1, v3) + d(v2, v3), slack=ROUND)

    k = int(rng.integers(4))
    w = (v1, -v1, v2, -v2)[k]
    ck.close("triangle_equality_at_vertex", d(v1, v2), d(v1, w) + d(v2, w), EXACT)

    base = (v1, v2)[k // 2] * (1.0 if k % 2 == 0 else -1.0)
    eps = 10.0 ** rng.uniform(-6, -2)
    t = rng.standard_normal(3)
    t -= (t @ base) * base
    near = base * math.cos(eps) + t / np.linalg.norm(t) * math.sin(eps)
    ck.at_most("triangle_strict_off_vertex", d(v1, v2), d(v1, near) + d(v2, near), strict=True)

    tri = random_triangle(_seed_int(rng), "any")
    lines = tri.vertices
    cb, slack = _oracle(lines)
    p = cb.argmin_cell
    for i in range(3):
        for j in range(3):
            if i != j:
                ck.at_most("distance_to_vertices", d(lines[i], p), d(lines[i], lines[j]), slack)
    for i in range(3):
        x, y, z = lines[i], lines[(i + 1) % 3], lines[(i + 2) % 3]
        n = np.cross(x, y)
        n /= np.linalg.norm(n)
        perp = (p @ n) * n
        par = p - perp
        ck.at_most("projection_sign", -(z @ par) * (z @ perp), 0.0, slack)
        ck.at_most("normal_vector_sign", -(z @ p) * (z @ n) * (p @ n), 0.0, slack)
    if not tri.big:
        x = lines @ p
        x = x if x.sum() >= 0 else -x
        ck.at_most("common_sign_of_inner_products", -x.min(), 0.0, slack)

    # interior minimizers: the stationarity condition
    phi = math.radians(rng.uniform(20.0, 58.0))
    eq = random_triangle(_seed_int(rng), ("equilateral", phi))
    cb, slack = _oracle(eq.vertices)
    p = cb.argmin_cell
    if min(projective_angle(p, v) for v in eq.vertices) > 2 * slack:
        s = sum((v @ p) * tau(p, v) for v in eq.vertices)
        ck.residual("zero_gradient_at_minimizer", np.linalg.norm(s), 1e-6)
        g = riemannian_gradient(WeightedPointSet.of(eq.vertices), p)
        ck.close("stationarity_form_is_gradient", np.linalg.norm(s + g), 0.0, ROUND)
    return ck.items


# ---------------------------------------------------------------- S3

def _trial_s3(rng: np.random.Generator) -> List[Observation]:
    ck = Checks()
    tri = random_triangle(_seed_int(rng), "big")
    total = tri.phi_ab + tri.phi_ac + tri.phi_bc
    ck.at_most("big_angle_sum_exceeds_pi", math.pi, total, strict=True)

    lines = tri.vertices
    cb, slack = _oracle(lines)
    p = cb.argmin_cell
    x = lines @ p
    order = np.argsort(-np.abs(x), kind="stable")
    a, b, c = (lines[i] * (1.0 if x[i] >= 0 else -1.0) for i in order)
    ck.at_most("closest_vertex_inner_product", 1.0 / math.sqrt(2.0), a @ p, slack, strict=True)
    ck.at_most("minimizer_is_vertex", min(projective_angle(p, v) for v in lines), 0.0, slack)
    flexible = min(abs(b @ p), abs(c @ p)) <= slack
    ck.holds("nonpositive_b_dot_c_choice", b @ c <= slack or flexible, b @ c)

    # the bound on tau_p(b).tau_p(c) holds for every such p, not only minimizers
    for _ in range(8):
        bb, cc, q = random_unit_vectors(rng, 3)
        cc = cc if bb @ cc <= 0 else -cc
        q = q if bb @ q >= 0 else -q
        if cc @ q >= 0:
            break
    else:
        return ck.items
    xb, xc = bb @ q, cc @ q
    ck.at_most("tau_inner_product_bound", tau(q, bb) @ tau(q, cc), -xb * xc, ROUND)
    u = xb * tau(q, bb) + xc * tau(q, cc)
    ck.at_most("u_norm_bound", u @ u, xb ** 2 + xc ** 2 * (1 - 2 * xb ** 2), ROUND)
    return ck.items


# ---------------------------------------------------------------- S4

def _trial_s4(rng: np.random.Generator, trial: int) -> List[Observation]:
    ck = Checks()
    pt = poly.sample_ring_points(rng, 1)
    for name, res in poly.link_residuals(pt).items():
        ck.residual(f"ideal_{name}", res[0], poly.REL_TOL)
    ipt = rng.integers(-6, 7, size=7)
    worst = max(poly.link_residuals_exact(ipt).values())
    ck.residual("ideal_links_exact_integer", worst, EXACT)

    alpha = rng.uniform(1.0, 100.0)
    w = rng.uniform(-50.0, 50.0)
    ch = poly.p_chain(alpha, w, check=False)
    ck.residual("p2_factorization", poly.relative_residual(
        ch.p2, 4 * (w - alpha) ** 2 * ch.p3,
        abs(32 * poly.u_of(alpha, w) * (alpha - w) ** 2 * (2 + alpha ** 2) ** 2) + ch.p1 ** 2
        + abs(4 * (w - alpha) ** 2 * ch.p3)), poly.REL_TOL)
    qc = poly.q_chain(alpha, w, check=False)
    corr = 4 * alpha * (4 - alpha) * (w - 1) ** 2 * qc.q1
    ck.residual("q3_factorization", poly.relative_residual(
        qc.q3, 4 * (w - 1) ** 2 * qc.q4,
        abs(32 * poly.u_of(alpha, w) * (alpha - w) ** 2) + qc.q1 ** 2 + abs(corr)
        + abs(4 * (w - 1) ** 2 * qc.q4)), poly.REL_TOL)
    ck.residual("p2_at_alpha_four", poly.relative_residual(*poly.p2_at_four(w)), poly.REL_TOL)
    ck.residual("u_identity", poly.relative_residual(*poly.u_identity(alpha, w)), ROUND)
    for name, coeffs, closed in (("p3", poly.p3_coefficients, poly.disc_p3_closed),
                                 ("q4", poly.q4_coefficients, poly.disc_q4_closed)):
        lhs = poly.quadratic_discriminant(coeffs(alpha))
        A, B, C = coeffs(alpha)
        ck.residual(f"disc_{name}_closed_form",
                    poly.relative_residual(lhs, closed(alpha), B * B + 4 * abs(A * C)), poly.REL_TOL)

    big = rng.uniform(4.0, 100.0)
    ck.at_most("disc_p3_negative_above_four", poly.disc_p3_closed(big), 0.0, strict=True)
    ck.at_most("lead_p3_positive_above_four", 0.0, poly.p3_coefficients(big)[0], strict=True)
    small = rng.uniform(1.0, 4.0)
    ck.at_most("disc_q4_negative_below_four", poly.disc_q4_closed(small), 0.0, strict=True)
    ck.at_most("lead_q4_positive_below_four", 0.0, poly.q4_coefficients(small)[0], strict=True)

    kind = trial % 3
    if kind == 0:
        a_r, expect = small, [1.0]
    elif kind == 1:
        a_r, expect = 4.0, [1.0, 4.0]
    else:
        a_r = rng.uniform(4.0, 20.0)
        expect = [a_r]
    got = poly.reduced_argmin(a_r, step=1e-2)
    err = max(abs(g - e) for g, e in zip(got, expect)) if len(got) == len(expect) else math.inf
    ck.residual("reduced_objective_minimizers", err, 1e-2)

    phi = math.radians(rng.uniform(20.0, 85.0))
    tri = random_triangle(_seed_int(rng), ("equilateral", phi))
    cb, slack = _oracle(tri.vertices)
    st = poly.EquilateralState.measure(tri.vertices, cb.argmin_cell)
    ys = (st.y1, st.y2, st.y3)
    ck.at_most("two_equal_distances_at_minimizer",
               min(abs(ys[0] - ys[1]), abs(ys[0] - ys[2]), abs(ys[1] - ys[2])), 0.0, slack)
    if phi < math.radians(59.0):
        ps = triangle_point_set(tri)
        run = descend(ps, centroid(tri) + 0.05 * rng.standard_normal(3), SolverConfig())
        st = poly.EquilateralState.measure(tri.vertices, run.point)
        ck.residual("F_system_at_stationary_point", max(abs(f) for f in poly.eval_F_system(st)), 1e-9)
    return ck.items


# ---------------------------------------------------------------- S5

def _sample_region_s5(rng: np.random.Generator, fr, tries: int = 200):
    """A point of the spherical triangle a, c, e_x with c.p >= c.a, p != a."""
    verts = np.vstack([fr.a, fr.c, E_X])
    ca = fr.c @ fr.a
    for _ in range(tries):
        lam = rng.dirichlet(np.ones(3))
        p = lam @ verts
        p /= np.linalg.norm(p)
        if fr.c @ p >= ca and np.linalg.norm(p - fr.a) > 1e-6:
            return p
    return None


def _plane_frame(a: np.ndarray, c_p: np.ndarray, b: np.ndarray):
    """chi (angle of b from span(a, c_p)) and theta (its azimuth from a)."""
    d = c_p - (a @ c_p) * a
    d /= np.linalg.norm(d)
    e3 = np.cross(a, d)
    chi = math.asin(min(1.0, abs(float(b @ e3))))
    theta = math.atan2(float(b @ d), float(b @ a))
    return d, chi, theta


def _trial_s5(rng: np.random.Generator) -> List[Observation]:
    ck = Checks()
    phi_ab = math.radians(rng.uniform(60.0, 85.0))
    phi_ac = math.radians(rng.uniform(math.degrees(phi_ab) + 0.1, 89.5))
    fr = isosceles_frame(phi_ab, phi_ac)
    lines = fr.lines
    cs = fr.c_star
    ck.close("c_star_angle_to_a", fr.a @ cs, math.cos(phi_ab), MEASURE)
    ck.close("c_star_angle_to_b", fr.b @ cs, math.cos(phi_ab), MEASURE)
    ck.holds("c_star_on_arc", 0.0 <= fr.beta_star <= fr.beta, fr.beta_star - fr.beta)

    m = np.diag([1.0, -1.0, 1.0])
    v = random_unit_vectors(rng, 1)[0]
    ck.close("reflection_symmetry", _J(lines, m @ v), _J(lines, v), ROUND)

    cb, slack = _oracle(lines)
    p = cb.argmin_cell
    p = p if p[0] >= 0 else -p
    p = p if p[1] >= 0 else m @ p
    for name, val in (("p_z", p[2]), ("a.p", fr.a @ p), ("b.p", fr.b @ p), ("c.p", fr.c @ p)):
        ck.at_most(f"range_of_p_{name}", -val, 0.0, slack)
    ck.at_most("isosceles_minimizer_is_a", projective_angle(p, fr.a), 0.0, slack)

    q = _sample_region_s5(rng, fr)
    if q is None:
        return ck.items
    slope = f_slope(fr, q)
    ck.at_most("slope_positive", 0.0, slope, strict=True)
    c_p, beta_p, b_pr = construct_c_p(fr, q)
    ck.close("f_vanishes_at_beta_prime", f_value(fr, q, b_pr), 0.0, ROUND)
    psis = np.linspace(0.0, math.pi / 2, 65)
    fv = np.array([f_value(fr, q, s) for s in psis])
    ck.at_most("f_strictly_ascending", -np.diff(fv).min(), 0.0, strict=True)
    if b_pr >= fr.beta_star:
        ck.close("c_p_coplanar_with_a_p", np.linalg.det(np.vstack([fr.a, q, c_p])), 0.0, MEASURE)
    ck.holds("c_p_on_arc", fr.beta_star <= beta_p <= fr.beta + ROUND, beta_p - fr.beta)

    h = fr.half
    for s in np.linspace(b_pr, fr.beta, 9):
        g = arc_point(s)
        ck.at_most("arc_closer_to_p_than_a", g @ fr.a, g @ q, ROUND)
        ck.at_most("arc_inner_product_with_a_nonneg", -(g @ fr.a), 0.0, ROUND)
    for s in np.linspace(b_pr, fr.beta, 11)[1:-1]:
        g, gp = arc_point(s), np.array([-math.sin(s), 0.0, math.cos(s)])
        dp, da = gp @ q, gp @ fr.a
        ck.at_most("descending_inner_products", max(dp, da), 0.0, strict=True)
        ck.at_most("weighted_slopes", -q[1] * da, -math.sin(h) * dp, strict=True)
        gq, ga = g @ q, g @ fr.a
        tp = -dp / math.sqrt(1 - gq * gq)
        ta = -da / math.sqrt(1 - ga * ga)
        ck.at_most("tangent_ratio_chain", ta, tp, strict=True)
        ck.at_most("tangent_ratio_positive", 0.0, ta, strict=True)
        dvp = -gq * dp / math.sqrt(1 - gq * gq)
        dva = -ga * da / math.sqrt(1 - ga * ga)
        ck.at_most("distance_derivatives", dva, dvp, strict=True)

    lines_p = np.vstack([fr.a, fr.b, c_p])
    diff_p = _J(lines, q) - _J(lines_p, q)
    diff_a = _J(lines, fr.a) - _J(lines_p, fr.a)
    ck.at_most("greater_difference", diff_a, diff_p, ROUND)
    if fr.beta - beta_p > 1e-6:
        ck.at_most("greater_difference_strict", diff_a, diff_p, strict=True)

    d, chi, theta = _plane_frame(fr.a, c_p, fr.b)
    k = math.cos(chi) ** 2
    ck.at_most("chi_bound", k, 0.5, strict=True)
    phi_acp = math.acos(min(1.0, fr.a @ c_p))

    def jd(delta):
        return (math.sin(delta) + math.sin(phi_acp - delta)
                + math.sqrt(1 - k * math.cos(delta - theta) ** 2))

    def jdd(delta):
        x = delta - theta
        s = math.sqrt(1 - k * math.cos(x) ** 2)
        return (-math.sin(delta) - math.sin(phi_acp - delta)
                + k * math.cos(x) ** 2 / s - k * math.sin(x) ** 2 / s ** 3)

    hstep = 1e-4
    for delta in np.linspace(0.0, phi_acp, 9):
        pt = math.cos(delta) * fr.a + math.sin(delta) * d
        ck.close("plane_objective_formula", jd(delta), _J(lines_p, pt), ROUND)
        ck.at_most("strict_concavity", jdd(delta), 0.0, strict=True)
        fd = (jd(delta + hstep) - 2 * jd(delta) + jd(delta - hstep)) / hstep ** 2
        ck.close("second_derivative_formula", jdd(delta), fd, 1e-5)

    ck.at_most("Jp_at_p_not_below_Jp_at_a", _J(lines_p, fr.a), _J(lines_p, q), ROUND)
    if beta_p > fr.beta_star + 1e-9:
        ck.at_most("Jp_at_p_strictly_above", _J(lines_p, fr.a), _J(lines_p, q), strict=True)
    ck.at_most("isosceles_conclusion", _J(lines, fr.a), _J(lines, q), strict=True)
    return ck.items


# ---------------------------------------------------------------- S6

def _trial_s6(rng: np.random.Generator) -> List[Observation]:
    ck = Checks()
    ab = rng.uniform(60.0, 80.0)
    ac = rng.uniform(ab, 85.0)
    bc = rng.uniform(ac + 0.5, 89.9)
    gf = construct_b_prime_c_prime(tuple(math.radians(x) for x in (ab, ac, bc)))
    a, b, c, b2, c2 = gf.a, gf.b, gf.c, gf.b_prime, gf.c_prime
    for name, u, v, phi in (("ab", a, b, gf.phi_ab), ("ac", a, c, gf.phi_ac), ("bc", b, c, gf.phi_bc)):
        ck.close(f"frame_angle_{name}", u @ v, math.cos(phi), MEASURE)
    cac = math.cos(gf.phi_ac)
    ck.close("a_dot_c_prime", a @ c2, cac, MEASURE)
    ck.close("b_dot_c_prime", b @ c2, cac, MEASURE)
    ck.close("b_prime_dot_c", b2 @ c, cac, MEASURE)
    ck.close("a_dot_b_prime", a @ b2, math.cos(gf.phi_ab), MEASURE)
    ck.at_most("alpha_below_two_thirds_pi", gf.alpha, 2 * math.pi / 3, strict=True)
    ck.at_most("alpha_prime_above_third_pi", math.pi / 3, gf.alpha_prime, strict=True)
    ck.at_most("alpha_prime_above_half_alpha", gf.alpha / 2, gf.alpha_prime, strict=True)
    ck.at_most("alpha_prime_below_alpha", gf.alpha_prime, gf.alpha, strict=True)
    n_ab = np.cross(a, b)
    ck.close("normal_ab_dot_c", n_ab @ c,
             math.sin(gf.phi_ab) * math.sin(gf.phi_ac) * math.sin(gf.alpha), ROUND)

    for name, tri in (("abc_prime", np.vstack([a, b, c2])), ("ab_prime_c", np.vstack([a, b2, c]))):
        cb, _ = _oracle(tri)
        ck.at_most(f"{name}_first_vertex_optimal", _J(tri, tri[0]), cb.upper, ROUND)
        ck.at_most(f"{name}_second_vertex_optimal", _J(tri, tri[1]), cb.upper, ROUND)
    lines = gf.lines
    cb, slack = _oracle(lines)
    ck.at_most("general_minimizer_is_a", projective_angle(cb.argmin_cell, a), 0.0, slack)

    n_ca = np.cross(c, a)
    q = None
    for _ in range(400):
        x = random_unit_vectors(rng, 1)[0]
        x = x if x @ a >= 0 else -x
        if (x @ b >= 0 and x @ c >= 0 and (n_ab @ c) * (n_ab @ x) >= 0
                and (n_ca @ b) * (n_ca @ x) >= 0 and x[2] < 1 - 1e-9):
            q = x
            break
    if q is None:
        return ck.items
    theta = math.atan2(q[1], q[0])
    ck.holds("azimuth_in_range", -ROUND <= theta <= gf.alpha + ROUND, theta)
    if theta <= gf.alpha_prime:
        ck.at_most("c_prime_closer_than_c", c @ q, c2 @ q, strict=True)
        ck.at_most("c_dot_p_nonneg", -(c @ q), 0.0, ROUND)
    else:
        ck.at_most("b_prime_closer_than_b", b @ q, b2 @ q, strict=True)
        ck.at_most("b_dot_p_nonneg", -(b @ q), 0.0, ROUND)
    ck.close("vertex_value_preserved", _J(np.vstack([a, b, c2]), a), _J(lines, a), ROUND)
    ck.at_most("general_conclusion", _J(lines, a), _J(lines, q), strict=True)
    return ck.items


_TRIALS: Dict[str, Callable] = {
    "S2": lambda rng, i: _trial_s2(rng),
    "S3": lambda rng, i: _trial_s3(rng),
    "S4": _trial_s4,
    "S5": lambda rng, i: _trial_s5(rng),
    "S6": lambda rng, i: _trial_s6(rng),
}


def verify_lemma_suite(section: str, seed: int, trials: int) -> List[IdentityReport]:
    """Run ``trials`` randomized trials of one section; one report per claim."""
    section = section.upper()
    if section not in _TRIALS:
        raise ValueError(f"unknown section {section!r}; expected one of {SECTIONS}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    fn = _TRIALS[section]
    obs = parallel_map(lambda i: fn(trial_rng(seed, section, i), i), range(trials))
    return [IdentityReport(f"{section}.{r.name}", r.trials, r.max_abs_residual, r.violations, r.tolerance)
            for r in summarize(obs)]


def verify_ideal_membership(seed: int, trials: int) -> IdentityReport:
    """All ideal-membership links at ``trials`` random points (worst link)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pts = poly.sample_ring_points(np.random.default_rng(seed), trials)
    res = poly.link_residuals(pts)
    stacked = np.vstack(list(res.values()))
    worst = stacked.max(axis=0)
    return IdentityReport("ideal_membership", trials, float(worst.max()),
                          int((worst > poly.REL_TOL).sum()), poly.REL_TOL)
