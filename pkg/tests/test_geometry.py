import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairpent.errors import DegenerateGeometryError
from fairpent.geometry import (
    ConvexPolygon,
    SideFigure,
    congruence_distance,
    eps_closeness,
    interior_angles,
    is_convex,
    perimeter,
    side_figure,
    side_figure_distance,
    signed_area,
)

PI = math.pi
UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def oracle_angles(pts):
    """Unsigned vertex angles via arccos, independent of orientation."""
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    out = []
    for i in range(n):
        u = pts[i - 1] - pts[i]
        w = pts[(i + 1) % n] - pts[i]
        c = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
        out.append(math.acos(max(-1.0, min(1.0, c))))
    return np.array(out)


def oracle_congruence(p, q):
    """Brute force over all 2n relabellings of q, features rebuilt from scratch."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    n = len(p)

    def feats(pts):
        lengths = np.array([np.linalg.norm(pts[(i + 1) % n] - pts[i]) for i in range(n)])
        return lengths, oracle_angles(pts)

    lp, ap = feats(p)
    best = math.inf
    for seq in (q, q[::-1]):
        for k in range(n):
            lq, aq = feats(np.roll(seq, -k, axis=0))
            best = min(best, max(np.abs(lp - lq).max(), np.abs(ap - aq).max()))
    return best


@st.composite
def convex_polygons(draw, min_n=3, max_n=8, scale=10.0):
    n = draw(st.integers(min_n, max_n))
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
    t = np.cumsum(gaps)
    t = 2 * PI * t / t[-1]
    rx = draw(st.floats(0.5, scale))
    ry = draw(st.floats(0.5, scale))
    cx = draw(st.floats(-scale, scale))
    cy = draw(st.floats(-scale, scale))
    return ConvexPolygon(np.column_stack([cx + rx * np.cos(t), cy + ry * np.sin(t)]))


motions = st.tuples(st.floats(0, 2 * PI), st.floats(-100, 100), st.floats(-100, 100))


class TestMeasures:
    def test_unit_square(self):
        assert signed_area(UNIT_SQUARE) == 1.0
        assert perimeter(UNIT_SQUARE) == 4.0
        np.testing.assert_allclose(interior_angles(UNIT_SQUARE), [PI / 2] * 4, atol=1e-15)

    def test_regular_hexagon(self, regular_hexagon):
        assert signed_area(regular_hexagon) == pytest.approx(3 * math.sqrt(3) / 2, abs=1e-14)
        assert perimeter(regular_hexagon) == pytest.approx(6.0, abs=1e-14)
        np.testing.assert_allclose(interior_angles(regular_hexagon), [2 * PI / 3] * 6, atol=1e-14)

    def test_v0_pentagon(self, v0_pentagon):
        assert signed_area(v0_pentagon) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
        assert perimeter(v0_pentagon) == pytest.approx(2 + 3 * math.sqrt(2) - math.sqrt(6), abs=1e-14)

    def test_v0_pentagon_angles(self, v0_pentagon):
        expected = [2 * PI / 3, 5 * PI / 12, 2 * PI / 3, 2 * PI / 3, 7 * PI / 12]
        np.testing.assert_allclose(oracle_angles(v0_pentagon), expected, atol=1e-12)
        np.testing.assert_allclose(interior_angles(v0_pentagon), expected, atol=1e-14)

    def test_pentagon_area_matches_three_determinants_bitwise(self, v0_pentagon, rng):
        for _ in range(50):
            p = v0_pentagon + rng.normal(scale=0.05, size=(5, 2)) + rng.uniform(-50, 50, size=2)
            p1, p2, p3, p4, p5 = p.tolist()
            rel = [(q[0] - p1[0], q[1] - p1[1]) for q in (p2, p3, p4, p5)]
            fan = 0.5 * (det(rel[0], rel[1]) + det(rel[1], rel[2]) + det(rel[2], rel[3]))
            assert signed_area(p) == fan

    def test_clockwise_area_is_negative(self):
        assert signed_area(UNIT_SQUARE[::-1]) == -1.0

    @pytest.mark.parametrize("bad", [[(0, 0), (1, 0)], [(0, 0), (1, float("nan")), (0, 1)]])
    def test_degenerate_input(self, bad):
        with pytest.raises(DegenerateGeometryError):
            signed_area(bad)

    def test_coincident_vertices(self):
        with pytest.raises(DegenerateGeometryError):
            interior_angles([(0, 0), (1, 0), (1, 0), (0, 1)])


class TestConvexity:
    def test_square_is_convex(self):
        assert is_convex(UNIT_SQUARE)

    def test_clockwise_rejected(self):
        assert not is_convex(UNIT_SQUARE[::-1])

    def test_reflex_rejected(self):
        assert not is_convex([(0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)])

    def test_straight_angle_rejected(self):
        assert not is_convex([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])

    def test_require_convex_raises(self):
        with pytest.raises(DegenerateGeometryError):
            ConvexPolygon(UNIT_SQUARE[::-1]).require_convex()


class TestSideFigures:
    def test_square_side(self):
        f = side_figure(UNIT_SQUARE, 0)
        assert f.length == 1.0
        assert f.angle_left == pytest.approx(PI / 2, abs=1e-15)
        assert f.angle_right == pytest.approx(PI / 2, abs=1e-15)

    def test_v0_marked_side(self, v0_pentagon):
        f = side_figure(v0_pentagon, 2)
        assert f.length == pytest.approx(1.0, abs=1e-15)
        assert f.angle_left == pytest.approx(2 * PI / 3, abs=1e-14)
        assert f.angle_right == pytest.approx(2 * PI / 3, abs=1e-14)

    def test_v0_spoke_side(self, v0_pentagon):
        f = side_figure(v0_pentagon, 0)
        assert f.length == pytest.approx((3 * math.sqrt(2) - math.sqrt(6)) / 2, abs=1e-15)
        assert f.length == pytest.approx(0.896575472, abs=1e-9)
        assert f.angle_left == pytest.approx(2 * PI / 3, abs=1e-14)
        assert f.angle_right == pytest.approx(5 * PI / 12, abs=1e-14)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            side_figure(UNIT_SQUARE, 4)

    @pytest.mark.parametrize(
        "f, g, expected",
        [
            ((1, 2 * PI / 3, 5 * PI / 12), (1, 5 * PI / 12, 2 * PI / 3), 0.0),
            ((1, 2.0, 2.1), (1, 2.0, 2.2), 0.1),
            ((1.05, 2.0, 2.1), (1.0, 2.0, 2.1), 0.05),
        ],
    )
    def test_distance(self, f, g, expected):
        assert side_figure_distance(SideFigure(*f), SideFigure(*g)) == pytest.approx(expected, abs=1e-15)


class TestCongruence:
    def test_rotated_translated(self, v0_pentagon):
        p = ConvexPolygon(v0_pentagon)
        q = p.transformed(math.radians(37), (3.2, -1.7))
        assert congruence_distance(p, q) <= 1e-12

    def test_mirror_image(self, v0_pentagon):
        p = ConvexPolygon(v0_pentagon)
        q = p.transformed(0.4, (1, 2), reflect=True)
        assert congruence_distance(p, q) <= 1e-12

    def test_vertex_pushed_outward_matches_brute_force(self, v0_pentagon):
        p = v0_pentagon
        q = p.copy()
        # exterior normal at vertex 2 = normalized sum of outward edge normals
        e_in, e_out = p[2] - p[1], p[3] - p[2]
        n = np.array([e_in[1], -e_in[0]]) / np.linalg.norm(e_in) + np.array([e_out[1], -e_out[0]]) / np.linalg.norm(e_out)
        q[2] += 0.01 * n / np.linalg.norm(n)
        d = congruence_distance(p, q)
        assert d > 0
        assert d == pytest.approx(oracle_congruence(p, q), abs=1e-12)

    def test_different_vertex_counts(self, v0_pentagon):
        assert congruence_distance(v0_pentagon, UNIT_SQUARE) == math.inf

    @given(convex_polygons(), convex_polygons())
    def test_matches_brute_force(self, p, q):
        if p.n != q.n:
            return
        assert congruence_distance(p, q) == pytest.approx(oracle_congruence(p.vertices, q.vertices), abs=1e-9)

    @given(convex_polygons(), convex_polygons())
    def test_symmetric(self, p, q):
        assert congruence_distance(p, q) == congruence_distance(q, p)
        assert congruence_distance(p, p) == 0.0

    @given(convex_polygons(min_n=5, max_n=5), convex_polygons(min_n=5, max_n=5), st.floats(0.1, 5.0))
    def test_scaling_bound(self, p, q, s):
        d = congruence_distance(p, q)
        ds = congruence_distance(ConvexPolygon(p.vertices * s), ConvexPolygon(q.vertices * s))
        assert ds <= max(s, 1.0) * d + 1e-9


class TestCloseness:
    def test_identical(self, regular_hexagon):
        assert eps_closeness(regular_hexagon, regular_hexagon) == 0.0

    def test_jittered(self, regular_hexagon, rng):
        d = rng.normal(size=(6, 2))
        d *= 0.01 / np.hypot(d[:, 0], d[:, 1]).max()
        assert eps_closeness(regular_hexagon, regular_hexagon + d) <= 0.01 + 1e-15

    def test_rotation_by_sixty_degrees(self, regular_hexagon):
        rotated = ConvexPolygon(regular_hexagon).transformed(PI / 3)
        assert eps_closeness(regular_hexagon, rotated) == pytest.approx(0.0, abs=1e-15)

    def test_vertex_counts_differ(self, regular_hexagon):
        with pytest.raises(ValueError):
            eps_closeness(regular_hexagon, UNIT_SQUARE)

    def test_reversal_considered(self):
        p = np.array(UNIT_SQUARE, dtype=float)
        assert eps_closeness(p, p[::-1]) == 0.0


class TestInvariance:
    @given(convex_polygons(), motions)
    def test_measures_invariant_under_rigid_motion(self, p, motion):
        theta, tx, ty = motion
        q = p.transformed(theta, (tx, ty))
        assert signed_area(q) == pytest.approx(signed_area(p), abs=1e-10)
        assert perimeter(q) == pytest.approx(perimeter(p), abs=1e-10)
        np.testing.assert_allclose(interior_angles(q), interior_angles(p), atol=1e-10)
        for i in range(p.n):
            a, b = side_figure(p, i), side_figure(q, i)
            assert side_figure_distance(a, b) <= 1e-10
        assert congruence_distance(p, q) <= 1e-10

    @given(convex_polygons(scale=1e3))
    def test_angle_sum(self, p):
        assert float(np.sum(interior_angles(p))) == pytest.approx((p.n - 2) * PI, abs=1e-10)

    @given(convex_polygons())
    def test_angles_match_arccos_oracle(self, p):
        np.testing.assert_allclose(interior_angles(p), oracle_angles(p.vertices), atol=1e-7)



def test_scalene_cyclic_relabellings_congruent():
    p = np.array([(0, 0), (2, 0), (2.6, 1.1), (1.2, 2.3), (-0.4, 1.2)])
    for k in range(5):
        assert congruence_distance(p, np.roll(p, -k, axis=0)) <= 1e-12
    mirrored = ConvexPolygon(p).transformed(reflect=True)
    assert congruence_distance(p, mirrored) <= 1e-12
