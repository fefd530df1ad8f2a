"""Planar polygon primitives and the voting-unit data model.

Coordinates are assumed to live in a planar projection already; nothing in
here knows about longitude/latitude. Areas come from the shoelace formula,
point membership from even-odd ray casting with a half-open tie rule (top
and left edges inclusive) so that abutting polygons partition the plane
without double-claiming boundary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import GeometryError

# Vertex snap tolerance for adjacency detection, relative to the bbox diagonal.
SNAP_RELATIVE_TOL = 1e-9


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class Bounds:
    minx: float
    miny: float
    maxx: float
    maxy: float

    @property
    def width(self) -> float:
        return self.maxx - self.minx

    @property
    def height(self) -> float:
        return self.maxy - self.miny

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def union(self, other: "Bounds") -> "Bounds":
        return Bounds(
            min(self.minx, other.minx),
            min(self.miny, other.miny),
            max(self.maxx, other.maxx),
            max(self.maxy, other.maxy),
        )


class Ring:
    """A closed polygon ring.

    The closing vertex is implicit: pass [(0,0), (1,0), (1,1)] for a triangle,
    not a repeated first point. Rings must have at least 3 vertices and
    non-zero signed area.
    """

    __slots__ = ("vertices",)

    def __init__(self, coords: Iterable[tuple[float, float]] | np.ndarray):
        v = np.asarray(coords, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise GeometryError("ring coordinates must be an (n, 2) sequence")
        if v.shape[0] >= 2 and np.array_equal(v[0], v[-1]):
            v = v[:-1]  # tolerate explicitly closed input
        if v.shape[0] < 3:
            raise GeometryError(f"degenerate ring: {v.shape[0]} vertices")
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite ring coordinate")
        v = v.copy()
        v.setflags(write=False)
        self.vertices = v
        if self.signed_area == 0.0:
            raise GeometryError("degenerate ring: zero area")

    @property
    def signed_area(self) -> float:
        x = self.vertices[:, 0]
        y = self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def length(self) -> float:
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.sum(np.hypot(d[:, 0], d[:, 1])))

    @property
    def bounds(self) -> Bounds:
        v = self.vertices
        return Bounds(float(v[:, 0].min()), float(v[:, 1].min()),
                      float(v[:, 0].max()), float(v[:, 1].max()))

    def centroid(self) -> Point2:
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        x2, y2 = np.roll(x, -1), np.roll(y, -1)
        cross = x * y2 - x2 * y
        a = 0.5 * float(np.sum(cross))
        cx = float(np.sum((x + x2) * cross)) / (6.0 * a)
        cy = float(np.sum((y + y2) * cross)) / (6.0 * a)
        return Point2(cx, cy)

    def __len__(self) -> int:
        return int(self.vertices.shape[0])


def _ring_parity(px: float, py: float, vertices: np.ndarray) -> int:
    """Crossing parity of a rightward ray from (px, py) against one ring.

    Edges count when they straddle the scanline under a (min, max] half-open
    rule in y, and the crossing lies strictly right of the point. Together
    these make top and left edges inclusive, bottom and right exclusive.
    """
    x, y = vertices[:, 0], vertices[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    straddle = (y >= py) != (y2 >= py)
    # sign of (crossing_x - px) without the division
    t = (x - px) * (y2 - y) + (py - y) * (x2 - x)
    cross = np.where(y2 > y, t, -t)
    return int(np.count_nonzero(straddle & (cross > 0.0)) & 1)


class PolygonSet:
    """One or more outer rings with optional holes.

    Holes are matched to the outer ring containing their centroid at
    construction time; a hole contained in no outer ring is an error.
    """

    __slots__ = ("outers", "holes", "hole_owner")

    def __init__(self, outers: Sequence[Ring], holes: Sequence[Ring] = ()):
        if not outers:
            raise GeometryError("polygon set needs at least one outer ring")
        self.outers = tuple(outers)
        self.holes = tuple(holes)
        owner = []
        for h in self.holes:
            c = h.centroid()
            for oi, outer in enumerate(self.outers):
                if _ring_parity(c.x, c.y, outer.vertices):
                    owner.append(oi)
                    break
            else:
                raise GeometryError("hole lies outside every outer ring")
        self.hole_owner = tuple(owner)

    @property
    def bounds(self) -> Bounds:
        b = self.outers[0].bounds
        for r in self.outers[1:]:
            b = b.union(r.bounds)
        return b

    def rings(self) -> tuple[Ring, ...]:
        return self.outers + self.holes


def polygon_area(geom: PolygonSet) -> float:
    """Total enclosed area: outer rings minus holes, orientation-independent."""
    a = sum(abs(r.signed_area) for r in geom.outers)
    a -= sum(abs(r.signed_area) for r in geom.holes)
    return float(a)


def polygon_perimeter(geom: PolygonSet, include_holes: bool = False) -> float:
    """Boundary length of the outer rings; hole boundaries only on request."""
    p = sum(r.length for r in geom.outers)
    if include_holes:
        p += sum(r.length for r in geom.holes)
    return float(p)


def point_in_polygon(point: Point2 | tuple[float, float], geom: PolygonSet) -> bool:
    """Even-odd membership over all rings (holes toggle a point back out)."""
    px, py = (point.x, point.y) if isinstance(point, Point2) else (float(point[0]), float(point[1]))
    parity = 0
    for ring in geom.rings():
        parity ^= _ring_parity(px, py, ring.vertices)
    return bool(parity)


class UnitKind(Enum):
    PRECINCT = "precinct"
    DISTRICT = "district"


@dataclass(frozen=True)
class VotingUnit:
    id: str
    geometry: PolygonSet
    dem_votes: int
    rep_votes: int
    kind: UnitKind = UnitKind.PRECINCT

    def __post_init__(self):
        if self.dem_votes < 0 or self.rep_votes < 0:
            raise GeometryError(f"unit {self.id}: negative vote count")
        if polygon_area(self.geometry) <= 0.0:
            raise GeometryError(f"unit {self.id}: non-positive area")

    @property
    def total_votes(self) -> int:
        return self.dem_votes + self.rep_votes

    def with_votes(self, dem: int, rep: int) -> "VotingUnit":
        return VotingUnit(self.id, self.geometry, dem, rep, self.kind)


class UnitCollection:
    """Immutable set of voting units with a cached overall bounding box."""

    __slots__ = ("units", "bounds", "_index")

    def __init__(self, units: Sequence[VotingUnit]):
        self.units = tuple(units)
        seen: dict[str, int] = {}
        for u in self.units:
            if u.id in seen:
                raise GeometryError(f"duplicate unit id: {u.id}")
            seen[u.id] = len(seen)
        self._index = seen
        if self.units:
            b = self.units[0].geometry.bounds
            for u in self.units[1:]:
                b = b.union(u.geometry.bounds)
        else:
            b = Bounds(0.0, 0.0, 0.0, 0.0)
        self.bounds = b

    def __len__(self) -> int:
        return len(self.units)

    def __iter__(self):
        return iter(self.units)

    def __getitem__(self, i: int) -> VotingUnit:
        return self.units[i]

    def by_id(self, unit_id: str) -> VotingUnit:
        return self.units[self._index[unit_id]]

    def __contains__(self, unit_id: str) -> bool:
        return unit_id in self._index

    def snap_tolerance(self) -> float:
        d = self.bounds.diagonal
        return SNAP_RELATIVE_TOL * d if d > 0 else SNAP_RELATIVE_TOL
