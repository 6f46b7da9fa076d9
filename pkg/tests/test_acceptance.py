"""Acceptance criteria, each reported as one PASS/FAIL line."""
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
import sympy as sp

from projmed.classifier import classify, triangle_point_set, vertex_objective_table
from projmed.core import centroid, random_triangle, sine_distance, triangle_from_degrees
from projmed.lemma_lab import polynomials as poly
from projmed.objective import (WeightedPointSet, equilateral_lines, evaluate, reduced_J,
                               reduced_point, riemannian_gradient)
from projmed.oracle import certified_min, oracle_agrees, projective_angle

from conftest import record_criterion
from oracles import fd_gradient, random_instance

DEG = math.pi / 180
GRID = 100_000
SQRT3 = math.sqrt(3.0)
SUITE_START = time.perf_counter()


def test_criterion_1_equilateral_phase_transition():
    t0 = time.perf_counter()
    bad = []
    for phi in (50, 55, 59, 60, 61, 65, 80):
        t = triangle_from_degrees(phi, phi, phi)
        cb = certified_min(triangle_point_set(t), GRID)
        ja, je = vertex_objective_table(t)[0], evaluate(triangle_point_set(t), centroid(t))
        near_e = projective_angle(cb.argmin_cell, centroid(t)) <= 2 * cb.resolution
        near_v = min(projective_angle(cb.argmin_cell, v) for v in t.vertices) <= 2 * cb.resolution
        if phi < 60:
            ok = cb.contains(je) and ja > cb.upper and near_e
        elif phi > 60:
            ok = cb.contains(ja) and je > cb.upper and near_v
        else:
            ok = (abs(je - SQRT3) < 1e-9 and abs(ja - SQRT3) < 1e-9
                  and cb.contains(SQRT3) and (near_e or near_v))
        ok = ok and oracle_agrees(classify(t), cb, 2 * cb.resolution)
        if not ok:
            bad.append(phi)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    record_criterion(1, ok, f"equilateral sweep, winner flips at 60 deg, J(E)=J(A)=sqrt3 "
                            f"(bad={bad}, {elapsed:.1f}s < 30s)")
    assert ok


def test_criterion_2_wide_triangles_agree_with_oracle():
    fails = 0
    for seed in range(300):
        t = random_triangle(seed, ("min_angle", 60.5 * DEG))
        ss = classify(t)
        cb = certified_min(triangle_point_set(t), GRID)
        if not (ss.covered and oracle_agrees(ss, cb, 2 * cb.resolution)):
            fails += 1
    record_criterion(2, fails == 0, f"300 triangles with phi_AB >= 60.5 deg agree with oracle "
                                    f"(failures={fails})")
    assert fails == 0


def test_criterion_3_big_triangles_minimized_at_vertices():
    fails = 0
    for seed in range(300):
        t = random_triangle(10_000 + seed, "big")
        cb = certified_min(triangle_point_set(t), GRID)
        at_vertex = min(projective_angle(cb.argmin_cell, v) for v in t.vertices) <= 2 * cb.resolution
        if not (at_vertex and t.phi_ab + t.phi_ac + t.phi_bc > math.pi):
            fails += 1
    record_criterion(3, fails == 0, f"300 big triangles: oracle argmin at a vertex, angle sum > pi "
                                    f"(failures={fails})")
    assert fails == 0


def _max_rel(pairs):
    return max(float(poly.relative_residual(*p)) for p in pairs)


def test_criterion_4_polynomial_identities():
    rng = np.random.default_rng(4)
    alpha = rng.uniform(1.0, 100.0, 1000)
    w = rng.uniform(-50.0, 50.0, 1000)
    worst = {}

    def p_pair(a, x):
        c = poly.p_chain(a, x, check=False)
        rhs = 4 * (x - a) ** 2 * c.p3
        return c.p2, rhs, abs(32 * poly.u_of(a, x) * (a - x) ** 2 * (2 + a * a) ** 2) + c.p1 ** 2 + abs(rhs)

    def q_pair(a, x):
        c = poly.q_chain(a, x, check=False)
        rhs = 4 * (x - 1) ** 2 * c.q4
        corr = 4 * a * (4 - a) * (x - 1) ** 2 * c.q1
        return c.q3, rhs, abs(32 * poly.u_of(a, x) * (a - x) ** 2) + c.q1 ** 2 + abs(corr) + abs(rhs)

    worst["p2_factorization"] = _max_rel(p_pair(a, x) for a, x in zip(alpha, w))
    worst["q3_factorization"] = _max_rel(q_pair(a, x) for a, x in zip(alpha, w))
    worst["u_identity"] = _max_rel(poly.u_identity(a, x) for a, x in zip(alpha, w))
    worst["p2_at_four"] = _max_rel(poly.p2_at_four(x) for x in w)
    for name, res in poly.link_residuals(poly.sample_ring_points(rng, 1000)).items():
        worst[f"ideal_{name}"] = float(res.max())
    numeric_ok = all(v < 1e-9 for v in worst.values())

    # independent oracle: symbolic expansion must vanish identically
    a, x = sp.symbols("a w")
    sym = [poly.p_chain(a, x, check=False), poly.q_chain(a, x, check=False)]
    exprs = [sym[0].p2 - 4 * (x - a) ** 2 * sym[0].p3, sym[1].q3 - 4 * (x - 1) ** 2 * sym[1].q4,
             poly.p2_at_four(x)[0] - poly.p2_at_four(x)[1],
             poly.u_identity(a, x)[0] - poly.u_identity(a, x)[1],
             poly.quadratic_discriminant(poly.p3_coefficients(a)) - poly.disc_p3_closed(a),
             poly.quadratic_discriminant(poly.q4_coefficients(a)) - poly.disc_q4_closed(a)]
    gens = sp.symbols("X1 X2 X3 Y1 Y2 Y3 Z")
    exprs += [lhs - rhs for lhs, rhs, _ in (fn(*gens) for fn in poly.IDEAL_LINKS.values())]
    symbolic_ok = all(sp.expand(e) == 0 for e in exprs)

    above = rng.uniform(4.0, 100.0, 100)
    below = rng.uniform(1.0, 4.0, 100)
    signs_ok = (all(poly.disc_p3_closed(v) < 0 and poly.p3_coefficients(v)[0] > 0 for v in above)
                and all(poly.disc_q4_closed(v) < 0 and poly.q4_coefficients(v)[0] > 0 for v in below))

    ok = numeric_ok and symbolic_ok and signs_ok
    record_criterion(4, ok, f"identities at 1000 points, max rel residual {max(worst.values()):.2e} "
                            f"< 1e-9; symbolic={symbolic_ok}; discriminant signs={signs_ok}")
    assert ok, worst


def test_criterion_5_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        ps, p = random_instance(rng)
        g = riemannian_gradient(ps, p)
        fd = fd_gradient(ps, p)
        worst = max(worst, float(np.linalg.norm(g - fd) / np.linalg.norm(g)))
    ok = worst < 1e-6
    record_criterion(5, ok, f"1000 gradients vs central differences, max rel error {worst:.2e} < 1e-6")
    assert ok


def test_criterion_6_reduced_objective_minima():
    rng = np.random.default_rng(6)
    cases = ([(a, lambda a: [1.0]) for a in rng.uniform(1.0, 4.0, 50)]
             + [(4.0, lambda a: [1.0, 4.0])] * 50
             + [(a, lambda a: [a]) for a in rng.uniform(4.0, 20.0, 50)])
    fails = 0
    for a, expect in cases:
        got = poly.reduced_argmin(float(a), step=1e-3)
        want = expect(a)
        if len(got) != len(want) or max(abs(g - e) for g, e in zip(got, want)) > 1e-3:
            fails += 1
        # the reduced objective must agree with the full objective at the argmin
        lines = WeightedPointSet.of(equilateral_lines(float(a)))
        if abs(reduced_J(a, got[0]) - evaluate(lines, reduced_point(got[0]))) > 1e-12:
            fails += 1
    at_four = abs(reduced_J(4.0, 1.0) - SQRT3) < 1e-15 and abs(reduced_J(4.0, 4.0) - SQRT3) < 1e-15
    ok = fails == 0 and at_four
    record_criterion(6, ok, f"reduced objective argmin w=1 / {{1,4}} / alpha on 150 alphas "
                            f"(failures={fails})")
    assert ok


def test_criterion_7_triangle_inequality():
    rng = np.random.default_rng(7)
    v = rng.standard_normal((10_000, 3, 3))
    v /= np.linalg.norm(v, axis=2, keepdims=True)
    ineq_fail = sum(sine_distance(a, b) > sine_distance(a, c) + sine_distance(b, c) for a, b, c in v)

    eq_fail = 0
    for a, b, _ in v[:1000]:
        for c in (a, -a, b, -b):
            eq_fail += sine_distance(a, b) != sine_distance(a, c) + sine_distance(b, c)

    strict_fail = 0
    for a, b, _ in v[:1000]:
        eps = 10 ** rng.uniform(-6, -2)
        c = a + eps * rng.standard_normal(3)
        c /= np.linalg.norm(c)
        strict_fail += not sine_distance(a, b) < sine_distance(a, c) + sine_distance(b, c)
    ok = ineq_fail == 0 and eq_fail == 0 and strict_fail == 0
    record_criterion(7, ok, f"1e4 triples satisfy the inequality ({ineq_fail} fail), exact equality "
                            f"at +-v1/+-v2 ({eq_fail} fail), 1e3 perturbed strict ({strict_fail} fail)")
    assert ok


def _verify_all():
    cmd = [sys.executable, "-m", "projmed", "verify", "--suite", "all", "--seed", "1", "--trials", "200"]
    return subprocess.run(cmd, capture_output=True, env=dict(os.environ))


def test_criterion_8_determinism_and_runtime():
    first, second = _verify_all(), _verify_all()
    identical = first.stdout == second.stdout and len(first.stdout) > 0
    clean = first.returncode == 0 and second.returncode == 0
    elapsed = time.perf_counter() - SUITE_START
    ok = identical and clean and elapsed < 300
    record_criterion(8, ok, f"verify --suite all --seed 1 --trials 200 twice: byte-identical={identical}, "
                            f"exit 0={clean}; acceptance run {elapsed:.0f}s < 300s")
    assert ok, first.stdout.decode()[-2000:]
