"""Polygon primitive tests: areas, perimeters, membership, model invariants."""

import math

import numpy as np
import pytest

from gerrytda.errors import GeometryError
from gerrytda.geometry import (
    Bounds,
    Point2,
    PolygonSet,
    Ring,
    UnitCollection,
    UnitKind,
    VotingUnit,
    point_in_polygon,
    polygon_area,
    polygon_perimeter,
)

UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def square(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def poly(*outers, holes=()):
    return PolygonSet([Ring(o) for o in outers], [Ring(h) for h in holes])


# === areas ===

def test_area_unit_square():
    assert polygon_area(poly(UNIT_SQUARE)) == 1.0


def test_area_triangle():
    assert polygon_area(poly([(0, 0), (1, 0), (0, 1)])) == 0.5


def test_area_square_with_hole():
    g = poly(UNIT_SQUARE, holes=[square(0.25, 0.25, 0.75, 0.75)])
    assert polygon_area(g) == pytest.approx(0.75, rel=1e-15)


def test_area_orientation_independent():
    cw = list(reversed(UNIT_SQUARE))
    assert polygon_area(poly(cw)) == 1.0
    assert Ring(cw).signed_area == -1.0


def test_area_multipart():
    g = poly(UNIT_SQUARE, square(2, 0, 3, 1))
    assert polygon_area(g) == 2.0


def test_area_rigid_motion_invariant():
    # translation + rotation leave the shoelace area unchanged to 1e-9 relative
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(3, 12))
        ang = np.sort(rng.uniform(0, 2 * np.pi, n))
        rad = rng.uniform(0.5, 2.0, n)
        pts = np.c_[rad * np.cos(ang), rad * np.sin(ang)]
        base = polygon_area(poly(pts))
        th = rng.uniform(0, 2 * np.pi)
        rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        moved = pts @ rot.T + rng.uniform(-100, 100, 2)
        assert polygon_area(poly(moved)) == pytest.approx(base, rel=1e-9)


# === perimeters ===

def test_perimeter_unit_square():
    assert polygon_perimeter(poly(UNIT_SQUARE)) == 4.0


def test_perimeter_triangle():
    got = polygon_perimeter(poly([(0, 0), (1, 0), (0, 1)]))
    assert got == pytest.approx(2.0 + math.sqrt(2.0), rel=1e-15)


def test_perimeter_two_disjoint_squares():
    assert polygon_perimeter(poly(UNIT_SQUARE, square(2, 0, 3, 1))) == 8.0


def test_perimeter_hole_flag():
    g = poly(UNIT_SQUARE, holes=[square(0.25, 0.25, 0.75, 0.75)])
    assert polygon_perimeter(g) == 4.0
    assert polygon_perimeter(g, include_holes=True) == 6.0


# === point membership ===

def test_pip_interior_and_exterior():
    g = poly(UNIT_SQUARE)
    assert point_in_polygon(Point2(0.5, 0.5), g)
    assert not point_in_polygon(Point2(1.5, 0.5), g)
    assert not point_in_polygon(Point2(0.5, -0.5), g)


def test_pip_hole():
    g = poly(UNIT_SQUARE, holes=[square(0.25, 0.25, 0.75, 0.75)])
    assert not point_in_polygon(Point2(0.5, 0.5), g)
    assert point_in_polygon(Point2(0.1, 0.5), g)


def test_pip_half_open_edges():
    # top and left edges belong to the polygon, bottom and right do not
    g = poly(UNIT_SQUARE)
    assert point_in_polygon(Point2(0.0, 0.5), g)       # left
    assert not point_in_polygon(Point2(1.0, 0.5), g)   # right
    assert point_in_polygon(Point2(0.5, 1.0), g)       # top
    assert not point_in_polygon(Point2(0.5, 0.0), g)   # bottom


def test_pip_no_double_claim_on_shared_edge():
    left = poly(square(0, 0, 1, 1))
    right = poly(square(1, 0, 2, 1))
    below = poly(square(0, -1, 1, 0))
    for y in (0.25, 0.5, 0.75):
        claims = point_in_polygon(Point2(1.0, y), left) + point_in_polygon(Point2(1.0, y), right)
        assert claims == 1
    for x in (0.25, 0.5, 0.75):
        claims = point_in_polygon(Point2(x, 0.0), left) + point_in_polygon(Point2(x, 0.0), below)
        assert claims == 1


def test_pip_convex_oracle():
    # random convex polygons: membership must agree with the half-plane
    # intersection test away from the boundary
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(3, 10))
        ang = np.sort(rng.uniform(0, 2 * np.pi, n))
        if np.min(np.diff(ang)) < 1e-3:
            continue
        pts = np.c_[np.cos(ang), np.sin(ang)]  # ccw on the unit circle
        g = poly(pts)
        for _ in range(30):
            q = rng.uniform(-1.2, 1.2, 2)
            # signed side of every edge; ccw polygon keeps interior on the left
            a = pts
            b = np.roll(pts, -1, axis=0)
            side = (b[:, 0] - a[:, 0]) * (q[1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (q[0] - a[:, 0])
            if np.min(np.abs(side)) < 1e-9:
                continue  # too close to an edge for the strict oracle
            expect = bool(np.all(side > 0))
            assert point_in_polygon(Point2(q[0], q[1]), g) == expect


# === validation ===

def test_ring_rejects_two_vertices():
    with pytest.raises(GeometryError):
        Ring([(0, 0), (1, 1)])


def test_ring_rejects_zero_area():
    with pytest.raises(GeometryError):
        Ring([(0, 0), (1, 1), (2, 2)])


def test_ring_accepts_closed_input():
    r = Ring([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
    assert len(r) == 4


def test_point_rejects_nan():
    with pytest.raises(GeometryError):
        Point2(float("nan"), 0.0)


def test_hole_outside_outer_rejected():
    with pytest.raises(GeometryError):
        poly(UNIT_SQUARE, holes=[square(2, 2, 3, 3)])


def test_unit_collection_duplicate_id():
    g = poly(UNIT_SQUARE)
    u = VotingUnit("A", g, 1, 2)
    with pytest.raises(GeometryError, match="duplicate unit id"):
        UnitCollection([u, VotingUnit("A", g, 3, 4)])


def test_unit_negative_votes_rejected():
    with pytest.raises(GeometryError):
        VotingUnit("A", poly(UNIT_SQUARE), -1, 2)


def test_collection_bounds_enclose_everything():
    units = [
        VotingUnit("A", poly(square(0, 0, 1, 1)), 1, 1),
        VotingUnit("B", poly(square(5, -2, 6, 4)), 1, 1),
    ]
    col = UnitCollection(units)
    assert col.bounds == Bounds(0.0, -2.0, 6.0, 4.0)
    assert col.by_id("B").kind is UnitKind.PRECINCT
