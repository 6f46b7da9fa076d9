import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projmed.core import triangle_from_degrees
from projmed.errors import HypothesisViolation
from projmed.lemma_lab import (construct_b_prime_c_prime, construct_c_p, construct_c_star,
                               isosceles_frame)
from projmed.lemma_lab.constructions import E_X, beta_prime, f_value, in_spherical_triangle

DEG = math.pi / 180


def unitize(v):
    return v / np.linalg.norm(v)


class TestCStar:
    def test_70_80(self):
        fr = isosceles_frame(70 * DEG, 80 * DEG)
        cs = construct_c_star(fr)
        assert fr.a @ cs == pytest.approx(math.cos(70 * DEG), abs=1e-10)
        assert fr.b @ cs == pytest.approx(math.cos(70 * DEG), abs=1e-10)
        assert cs[1] == 0 and fr.beta_star <= fr.beta

    def test_from_triangle(self):
        cs = construct_c_star(triangle_from_degrees(70, 80, 80))
        assert np.linalg.norm(cs) == pytest.approx(1.0)

    def test_degenerate_equals_c(self):
        fr = isosceles_frame(75 * DEG, 75 * DEG)
        np.testing.assert_allclose(fr.c_star, fr.c, atol=1e-15)

    def test_right_angle_rejected(self):
        with pytest.raises(HypothesisViolation):
            isosceles_frame(70 * DEG, 90 * DEG)
        with pytest.raises(HypothesisViolation):
            isosceles_frame(55 * DEG, 70 * DEG)

    def test_non_isosceles_rejected(self):
        with pytest.raises(HypothesisViolation):
            construct_c_star(triangle_from_degrees(65, 70, 80))

    def test_frame_angles(self):
        fr = isosceles_frame(65 * DEG, 85 * DEG)
        assert fr.a @ fr.b == pytest.approx(math.cos(65 * DEG), abs=1e-15)
        assert fr.a @ fr.c == pytest.approx(math.cos(85 * DEG), abs=1e-15)
        assert fr.b @ fr.c == pytest.approx(math.cos(85 * DEG), abs=1e-15)


class TestCP:
    fr = isosceles_frame(68 * DEG, 82 * DEG)

    def test_p_equals_a(self):
        c_p, beta_p, bp = construct_c_p(self.fr, self.fr.a)
        assert bp == 0.0
        np.testing.assert_allclose(c_p, self.fr.c_star)

    @pytest.mark.parametrize("s", [0.2, 0.5, 0.9])
    def test_on_arc_ac_coplanar(self, s):
        p = unitize((1 - s) * self.fr.a + s * self.fr.c)
        c_p, beta_p, bp = construct_c_p(self.fr, p)
        assert bp >= self.fr.beta_star
        assert abs(np.linalg.det(np.vstack([self.fr.a, p, c_p]))) < 1e-10

    def test_near_ex_uses_c_star(self):
        p = unitize(0.9 * E_X + 0.1 * self.fr.a + 0.02 * self.fr.c)
        c_p, beta_p, bp = construct_c_p(self.fr, p)
        assert bp < self.fr.beta_star
        np.testing.assert_allclose(c_p, self.fr.c_star)

    def test_outside_rejected(self):
        with pytest.raises(HypothesisViolation):
            construct_c_p(self.fr, self.fr.b)

    @given(st.floats(0.01, 1), st.floats(0.01, 1), st.floats(0.01, 1))
    def test_root_of_f(self, u, v, w):
        p = unitize(u * self.fr.a + v * self.fr.c + w * E_X)
        assert in_spherical_triangle(p, self.fr.a, self.fr.c, E_X)
        bp = beta_prime(self.fr, p)
        assert abs(f_value(self.fr, p, bp)) < 1e-12
        c_p, beta_p, _ = construct_c_p(self.fr, p)
        assert beta_p == max(bp, self.fr.beta_star)


class TestBPrimeCPrime:
    def test_65_70_80(self):
        g = construct_b_prime_c_prime(triangle_from_degrees(65, 70, 80))
        cac = math.cos(70 * DEG)
        assert g.a @ g.c_prime == pytest.approx(cac, abs=1e-10)
        assert g.b @ g.c_prime == pytest.approx(cac, abs=1e-10)
        assert g.b_prime @ g.c == pytest.approx(cac, abs=1e-10)
        assert g.a @ g.b_prime == pytest.approx(math.cos(65 * DEG), abs=1e-10)
        assert g.alpha / 2 < g.alpha_prime < g.alpha

    def test_limit(self):
        g = construct_b_prime_c_prime((65 * DEG, 70 * DEG, 70 * DEG + 1e-9))
        assert g.alpha_prime == pytest.approx(g.alpha, abs=1e-6)

    def test_60_60_70(self):
        g = construct_b_prime_c_prime((60 * DEG, 60 * DEG, 70 * DEG))
        assert g.alpha_prime > g.alpha / 2

    def test_hypotheses(self):
        with pytest.raises(HypothesisViolation):
            construct_b_prime_c_prime((55 * DEG, 70 * DEG, 80 * DEG))
        with pytest.raises(HypothesisViolation):
            construct_b_prime_c_prime((65 * DEG, 80 * DEG, 80 * DEG))
        with pytest.raises(HypothesisViolation):
            construct_b_prime_c_prime(triangle_from_degrees(70, 80, 85, big=True))

    @given(st.floats(60, 85), st.floats(0, 1), st.floats(0.01, 1))
    def test_inner_products_property(self, ab, s, r):
        ac = ab + s * (88 - ab)
        bc = ac + r * (90 - ac)
        g = construct_b_prime_c_prime((ab * DEG, ac * DEG, bc * DEG))
        cac = math.cos(ac * DEG)
        for x, y in ((g.a, g.c_prime), (g.b, g.c_prime), (g.b_prime, g.c)):
            assert x @ y == pytest.approx(cac, abs=1e-10)
        assert g.alpha / 2 < g.alpha_prime < g.alpha
