"""Geometric compactness scores and the paired two-tailed t-test.

Polsby-Popper and Reock use the standard definitions (isoperimetric quotient
and minimal-enclosing-circle quotient). The p-value comes from the Student-t
distribution through a regularized incomplete beta function evaluated by
continued fraction, so the package carries no stats dependency.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateSampleError, GeometryError, ParameterError
from .geometry import (
    Point2,
    PolygonSet,
    UnitCollection,
    polygon_area,
    polygon_perimeter,
)


def polsby_popper(geom: PolygonSet) -> float:
    """4 pi A / P^2, holes counted in both area and boundary length."""
    perimeter = polygon_perimeter(geom, include_holes=True)
    if perimeter <= 0.0:
        raise GeometryError("zero perimeter")
    return 4.0 * math.pi * polygon_area(geom) / (perimeter * perimeter)


def _circle_two(p, q):
    cx, cy = (p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0
    return (cx, cy, math.hypot(p[0] - cx, p[1] - cy))


def _circle_three(p, q, r):
    d = 2.0 * (p[0] * (q[1] - r[1]) + q[0] * (r[1] - p[1]) + r[0] * (p[1] - q[1]))
    if abs(d) < 1e-30:
        # collinear: span the farthest pair instead
        pairs = [(p, q), (p, r), (q, r)]
        a, b = max(pairs, key=lambda ab: (ab[0][0] - ab[1][0]) ** 2
                   + (ab[0][1] - ab[1][1]) ** 2)
        return _circle_two(a, b)
    p2 = p[0] ** 2 + p[1] ** 2
    q2 = q[0] ** 2 + q[1] ** 2
    r2 = r[0] ** 2 + r[1] ** 2
    cx = (p2 * (q[1] - r[1]) + q2 * (r[1] - p[1]) + r2 * (p[1] - q[1])) / d
    cy = (p2 * (r[0] - q[0]) + q2 * (p[0] - r[0]) + r2 * (q[0] - p[0])) / d
    return (cx, cy, math.hypot(p[0] - cx, p[1] - cy))


def _inside(circle, p) -> bool:
    cx, cy, r = circle
    return math.hypot(p[0] - cx, p[1] - cy) <= r * (1.0 + 1e-12) + 1e-14


def min_enclosing_circle(points: Sequence, seed: int = 0) -> tuple[Point2, float]:
    """Smallest circle containing every point (randomized incremental).

    The shuffle is seeded so repeated runs return bit-identical results.
    """
    pts = [(float(p[0]), float(p[1])) if not isinstance(p, Point2)
           else (p.x, p.y) for p in points]
    if not pts:
        raise ParameterError("need at least one point")
    pts = list(dict.fromkeys(pts))  # dedup, keeps first occurrence
    random.Random(seed).shuffle(pts)

    c = (pts[0][0], pts[0][1], 0.0)
    for i in range(1, len(pts)):
        if _inside(c, pts[i]):
            continue
        c = (pts[i][0], pts[i][1], 0.0)
        for j in range(i):
            if _inside(c, pts[j]):
                continue
            c = _circle_two(pts[i], pts[j])
            for k in range(j):
                if not _inside(c, pts[k]):
                    c = _circle_three(pts[i], pts[j], pts[k])
    return Point2(c[0], c[1]), c[2]


def reock(geom: PolygonSet, seed: int = 0) -> float:
    """Area over the area of the minimal enclosing circle of all vertices."""
    vertices = [(x, y) for ring in geom.rings() for x, y in ring.vertices]
    _, r = min_enclosing_circle(vertices, seed=seed)
    if r <= 0.0:
        raise GeometryError("degenerate geometry: enclosing radius is zero")
    return polygon_area(geom) / (math.pi * r * r)


@dataclass(frozen=True)
class CompactnessRow:
    district_id: str
    polsby_popper: float
    reock: float


def score_units(units: UnitCollection, seed: int = 0) -> list[CompactnessRow]:
    return [CompactnessRow(u.id, polsby_popper(u.geometry),
                           reock(u.geometry, seed=seed)) for u in units]


def scores_to_csv(rows: Sequence[CompactnessRow]) -> str:
    lines = ["district_id,polsby_popper,reock"]
    lines.extend(f"{r.district_id},{r.polsby_popper!r},{r.reock!r}" for r in rows)
    return "\n".join(lines) + "\n"


# === Student-t p-value machinery ===

def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-12:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # the continued fraction converges fast only below the pivot
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def t_p_value(t: float, df: int) -> float:
    """Two-tailed p for a t statistic: I_{df/(df+t^2)}(df/2, 1/2)."""
    if df < 1:
        raise ParameterError(f"degrees of freedom must be >= 1, got {df}")
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: int
    p_value: float


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-tailed paired t-test on elementwise differences a - b."""
    if len(a) != len(b):
        raise ParameterError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ParameterError("need at least 2 pairs")
    d = [float(x) - float(y) for x, y in zip(a, b)]
    mean = sum(d) / n
    var = sum((x - mean) ** 2 for x in d) / (n - 1)
    if var == 0.0:
        raise DegenerateSampleError("differences have zero variance")
    t = mean / math.sqrt(var / n)
    return TTestResult(t, n - 1, t_p_value(t, n - 1))
