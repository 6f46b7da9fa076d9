import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projmed.core import (AngleTriple, angular_distance, centroid, is_big, normalize_signs,
                          random_triangle, read_points, read_weights, same_line, sine_distance,
                          triangle_from_angles, triangle_from_degrees)
from projmed.errors import (BigTriangleError, DegenerateTriangle, DimensionMismatch,
                            InfeasibleConstraint, NotUnitVector, PointFileError, UnrealizableAngles)
from projmed.objective import equilateral_lines

from conftest import unit
from strategies import independent_triples, unit_vectors

DEG = math.pi / 180


class TestDistances:
    def test_sine_examples(self):
        p = np.array([1.0, 0, 0])
        assert sine_distance(p, p) == 0.0
        assert sine_distance(p, [0, 1.0, 0]) == pytest.approx(1.0, abs=1e-15)
        assert sine_distance(p, [0.5, math.sqrt(3) / 2, 0]) == pytest.approx(0.8660254037844386, abs=1e-15)

    def test_angular_examples(self):
        p = np.array([1.0, 0, 0])
        assert angular_distance(p, p) == 0.0
        assert angular_distance(p, [0, 0, 1.0]) == pytest.approx(math.pi / 2, abs=1e-15)
        assert angular_distance(p, unit(1, 1, 0)) == pytest.approx(math.pi / 4, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sine_distance([1.0, 0, 0], [1.0, 0])
        with pytest.raises(DimensionMismatch):
            angular_distance([1.0, 0, 0], [0, 1.0, 0, 0])

    def test_rejects_non_unit(self):
        with pytest.raises(NotUnitVector):
            sine_distance([2.0, 0, 0], [1.0, 0, 0])

    @given(unit_vectors(), unit_vectors())
    def test_range_symmetry_sign(self, p, q):
        d = sine_distance(p, q)
        assert 0.0 <= d <= 1.0
        assert d == pytest.approx(sine_distance(q, p), abs=1e-15)
        assert d == pytest.approx(sine_distance(-p, q), abs=1e-15)
        assert d == pytest.approx(math.sin(angular_distance(p, q)), abs=1e-12)
        assert 0.0 <= angular_distance(p, q) <= math.pi / 2

    @given(unit_vectors(), unit_vectors(), unit_vectors())
    def test_triangle_inequality(self, v1, v2, v3):
        assert sine_distance(v1, v2) <= sine_distance(v1, v3) + sine_distance(v2, v3) + 1e-15

    @given(unit_vectors(), unit_vectors(), st.sampled_from([1.0, -1.0]))
    def test_triangle_equality_at_endpoint(self, v1, v2, s):
        assert sine_distance(v1, v2) == sine_distance(v1, s * v1) + sine_distance(v2, s * v1)

    @given(unit_vectors(dim=5), unit_vectors(dim=5))
    def test_higher_dimension(self, p, q):
        assert sine_distance(p, q) == pytest.approx(math.sqrt(max(0.0, 1 - (p @ q) ** 2)), abs=1e-7)

    def test_same_line(self):
        p = unit(1, 2, 3)
        assert same_line(p, -p)
        assert not same_line(p, unit(1, 2, 3.1))


class TestNormalizeSigns:
    def test_orthonormal(self):
        t = normalize_signs(np.eye(3))
        np.testing.assert_array_equal(t.vertices, np.eye(3))
        assert t.angles.degrees() == pytest.approx((90.0, 90.0, 90.0))

    def test_flipped_vertex_restored(self):
        t0 = triangle_from_degrees(65, 70, 80)
        t = normalize_signs([t0.a, -t0.b, t0.c])
        assert min(t.inner_products) > 0
        assert t.angles.degrees() == pytest.approx((65, 70, 80), abs=1e-9)

    def test_seed_7_non_big(self):
        t = random_triangle(7, "non_big")
        ab, ac, bc = t.inner_products
        assert ab > 0 and ac > 0 and bc > 0
        # brute enumeration: exactly one of the four sign classes is all-positive
        reps = [(sb, sc) for sb in (1, -1) for sc in (1, -1)
                if min(t.a @ (sb * t.b), t.a @ (sc * t.c), (sb * t.b) @ (sc * t.c)) > 0]
        assert reps == [(1, 1)]

    def test_collinear_rejected(self):
        with pytest.raises(DegenerateTriangle):
            normalize_signs([[1.0, 0, 0], [0, 1.0, 0], unit(1, 1, 0)])

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            normalize_signs([[1.0, 0], [0, 1.0], unit(1, 1)])

    @given(independent_triples())
    def test_sorted_angles_and_signs(self, m):
        t = normalize_signs(m)
        assert t.phi_ab <= t.phi_ac <= t.phi_bc <= math.pi / 2
        ab, ac, bc = t.inner_products
        if not t.big:
            assert min(ab, ac, bc) > 0
        else:
            assert ab >= 0 and ac >= 0
        for v in t.vertices:
            assert any(same_line(v, row) for row in m)

    @given(independent_triples(), st.permutations([0, 1, 2]))
    def test_permutation_invariance(self, m, perm):
        t1, t2 = normalize_signs(m), normalize_signs(m[list(perm)])
        assert tuple(t1.angles) == pytest.approx(tuple(t2.angles), abs=1e-12)


class TestBig:
    def test_examples(self):
        assert is_big(normalize_signs(np.eye(3)))
        assert not is_big(triangle_from_degrees(80, 80, 80))
        assert is_big([[1.0, 0, 0], [0, 1.0, 0], unit(1, 1, 1)])

    @given(independent_triples(), st.lists(st.sampled_from([1.0, -1.0]), min_size=3, max_size=3))
    def test_sign_invariance(self, m, signs):
        assert is_big(m) == is_big(np.asarray(signs)[:, None] * m)

    def test_angle_sum_exceeds_pi(self):
        for seed in range(1000):
            t = random_triangle(seed, "big")
            assert t.phi_ab + t.phi_ac + t.phi_bc > math.pi


class TestTriangleFromAngles:
    def test_65_70_80(self):
        t = triangle_from_degrees(65, 70, 80)
        cos_alpha = (math.cos(80 * DEG) - math.cos(65 * DEG) * math.cos(70 * DEG)) / (
            math.sin(65 * DEG) * math.sin(70 * DEG))
        assert cos_alpha == pytest.approx(0.03418, abs=1e-5)
        assert t.angles.degrees() == pytest.approx((65, 70, 80), abs=1e-10 / DEG)
        np.testing.assert_allclose(t.a, [0, 0, 1.0])

    def test_orthonormal(self):
        t = triangle_from_degrees(90, 90, 90)
        np.testing.assert_allclose(t.vertices @ t.vertices.T, np.eye(3), atol=1e-15)

    def test_unrealizable(self):
        with pytest.raises(UnrealizableAngles, match="-1.793"):
            triangle_from_degrees(30, 40, 85)

    def test_collinear_is_degenerate(self):
        with pytest.raises(DegenerateTriangle):
            triangle_from_degrees(30, 40, 70)

    def test_out_of_range(self):
        with pytest.raises(UnrealizableAngles):
            triangle_from_degrees(30, 40, 95)
        with pytest.raises(DegenerateTriangle):
            triangle_from_degrees(0, 40, 40)

    def test_big_realization(self):
        t = triangle_from_degrees(70, 80, 85, big=True)
        assert t.big
        assert t.angles.degrees() == pytest.approx((70, 80, 85), abs=1e-9)

    @given(independent_triples())
    def test_round_trip(self, m):
        t = normalize_signs(m)
        t2 = triangle_from_angles(tuple(t.angles), big=t.big)
        assert tuple(t2.angles) == pytest.approx(tuple(t.angles), abs=1e-10)

    def test_angle_triple_sorting(self):
        a = AngleTriple.of([1.2, 0.3, 0.9])
        assert tuple(a) == (0.3, 0.9, 1.2)


class TestCentroid:
    def test_parametrized_equilateral(self):
        for alpha in (1.5, 4.0, 9.0):
            t = normalize_signs(equilateral_lines(alpha))
            np.testing.assert_allclose(centroid(t), np.ones(3) / math.sqrt(3), atol=1e-15)

    def test_orthonormal(self):
        t = normalize_signs(np.eye(3))
        np.testing.assert_allclose(centroid(t), np.ones(3) / math.sqrt(3), atol=1e-15)

    def test_sixty(self):
        t = triangle_from_degrees(60, 60, 60)
        e = centroid(t)
        for v in t.vertices:
            assert e @ v == pytest.approx(2 / math.sqrt(6), abs=1e-15)

    def test_big_rejected(self):
        with pytest.raises(BigTriangleError):
            centroid(triangle_from_degrees(70, 80, 85, big=True))


class TestRandomTriangle:
    def test_equilateral_60(self):
        t = random_triangle(1, ("equilateral", math.pi / 3))
        m = t.vertices
        for i, j in ((0, 1), (0, 2), (1, 2)):
            assert angular_distance(m[i], m[j]) == pytest.approx(math.pi / 3, abs=1e-10)

    def test_min_angle(self):
        assert random_triangle(2, ("min_angle", math.pi / 3)).phi_ab >= math.pi / 3

    def test_deterministic(self):
        np.testing.assert_array_equal(random_triangle(3).vertices, random_triangle(3).vertices)

    def test_isosceles(self):
        t = random_triangle(4, ("isosceles", 70 * DEG, 80 * DEG))
        assert t.angles.degrees() == pytest.approx((70, 80, 80), abs=1e-9)

    def test_infeasible(self):
        with pytest.raises(InfeasibleConstraint):
            random_triangle(5, ("min_angle", 89.9 * DEG), max_tries=50)


class TestFiles:
    def test_read_points(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("# three lines\n2 0 0\n0 3 0\n\n0 0 -1\n")
        np.testing.assert_allclose(read_points(f), [[1, 0, 0], [0, 1, 0], [0, 0, -1]])

    @pytest.mark.parametrize("text", ["", "1 0 0\n1 0\n", "1 x 0\n", "0 0 0\n", "1\n", "nan 0 1\n"])
    def test_malformed_points(self, tmp_path, text):
        f = tmp_path / "p.txt"
        f.write_text(text)
        with pytest.raises(PointFileError):
            read_points(f)

    def test_missing_file(self, tmp_path):
        with pytest.raises(PointFileError):
            read_points(tmp_path / "none.txt")

    def test_weights(self, tmp_path):
        f = tmp_path / "w.txt"
        f.write_text("2\n# c\n0.5\n")
        np.testing.assert_allclose(read_weights(f), [2.0, 0.5])
        f.write_text("1\n-1\n")
        with pytest.raises(PointFileError):
            read_weights(f)
