import math
import random

import pytest

from ramacity import poly

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
L_SHAPE = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]


def tri_area(rings_verts, tris):
    total = 0.0
    for a, b, c in tris:
        (ax, ay), (bx, by), (cx, cy) = rings_verts[a], rings_verts[b], rings_verts[c]
        total += 0.5 * abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
    return total


class TestBasics:
    def test_signed_area_orientation(self):
        assert poly.signed_area(SQUARE) == 1.0
        assert poly.signed_area(list(reversed(SQUARE))) == -1.0

    def test_centroid_square(self):
        assert poly.ring_centroid(SQUARE) == (0.5, 0.5)

    def test_centroid_l_shape(self):
        # area 3; decompose into 2x1 bottom (centroid (1, 0.5)) + 1x1 top ((0.5, 1.5))
        cx, cy = poly.ring_centroid(L_SHAPE)
        assert cx == pytest.approx((2 * 1.0 + 1 * 0.5) / 3)
        assert cy == pytest.approx((2 * 0.5 + 1 * 1.5) / 3)

    def test_simple_detection(self):
        assert poly.ring_is_simple(SQUARE)
        bowtie = [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
        assert not poly.ring_is_simple(bowtie)
        assert not poly.ring_is_simple([(0.0, 0.0), (1.0, 0.0)])

    def test_point_in_polygon_with_hole(self):
        rings = [SQUARE, [(0.4, 0.4), (0.4, 0.6), (0.6, 0.6), (0.6, 0.4)]]
        assert poly.point_in_polygon(0.2, 0.2, rings)
        assert not poly.point_in_polygon(0.5, 0.5, rings)  # inside the hole
        assert not poly.point_in_polygon(2.0, 0.5, rings)


class TestDistances:
    def test_seg_point(self):
        assert poly.seg_point_dist((0, 0), (10, 0), (5, 3)) == 3.0
        assert poly.seg_point_dist((0, 0), (10, 0), (-4, 3)) == 5.0

    def test_seg_seg_crossing(self):
        assert poly.seg_seg_dist((0, 0), (2, 2), (0, 2), (2, 0)) == 0.0

    def test_seg_seg_parallel(self):
        assert poly.seg_seg_dist((0, 0), (1, 0), (0, 2), (1, 2)) == 2.0

    def test_seg_polygon_inside(self):
        assert poly.seg_polygon_dist((0.5, 0.5), (0.6, 0.5), [SQUARE]) == 0.0

    def test_seg_polygon_outside(self):
        assert poly.seg_polygon_dist((3.0, 0.0), (3.0, 1.0), [SQUARE]) == 2.0


class TestRayExit:
    def test_square_exit_south(self):
        t = poly.ray_ring_exit((0.5, 0.5), (0.0, -1.0), SQUARE)
        assert t == pytest.approx(0.5)

    def test_takes_farthest_crossing(self):
        t = poly.ray_ring_exit((0.5, 0.5), (1.0, 0.0), L_SHAPE)
        assert t == pytest.approx(1.5)

    def test_no_crossing(self):
        assert poly.ray_ring_exit((5.0, 5.0), (1.0, 0.0), SQUARE) is None


class TestTriangulate:
    def test_square(self):
        verts, tris = poly.triangulate([SQUARE])
        assert len(verts) == 4
        assert len(tris) == 2
        assert tri_area(verts, tris) == pytest.approx(1.0)

    def test_l_shape(self):
        verts, tris = poly.triangulate([L_SHAPE])
        assert len(tris) == 4
        assert tri_area(verts, tris) == pytest.approx(3.0)

    def test_square_with_hole(self):
        hole = [(0.4, 0.4), (0.4, 0.6), (0.6, 0.6), (0.6, 0.4)]  # CW
        verts, tris = poly.triangulate([SQUARE, hole])
        assert tri_area(verts, tris) == pytest.approx(1.0 - 0.04)

    def test_all_triangles_ccw(self):
        verts, tris = poly.triangulate([L_SHAPE])
        for a, b, c in tris:
            assert poly._cross(verts[a], verts[b], verts[c]) > 0

    def test_collinear_vertex_dropped(self):
        ring = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        verts, tris = poly.triangulate([ring])
        assert tri_area(verts, tris) == pytest.approx(1.0)

    def test_degenerate_rejected(self):
        with pytest.raises(poly.BadPolygon):
            poly.triangulate([[(0.0, 0.0), (1.0, 0.0)]])

    def test_random_convex_polygons(self):
        rng = random.Random(9)
        for _ in range(50):
            n = rng.randint(3, 12)
            angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
            if len(set(angles)) < n:
                continue
            r = rng.uniform(1, 50)
            ring = [(r * math.cos(a), r * math.sin(a)) for a in angles]
            verts, tris = poly.triangulate([ring])
            assert tri_area(verts, tris) == pytest.approx(poly.signed_area(ring), rel=1e-9)
