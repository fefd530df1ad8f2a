"""Brute-force oracles shared by the unit and acceptance tests.

Everything here trades speed for obviousness: exhaustive enumeration and
direct quadrature, no shared code with the library paths under test.
"""

import math
from itertools import combinations, permutations


def _dist(x, y, metric):
    dx, dy = abs(x[0] - y[0]), abs(x[1] - y[1])
    return max(dx, dy) if metric == "linf" else math.hypot(dx, dy)


def _diag(x, metric):
    pers = x[1] - x[0]
    return pers / 2.0 if metric == "linf" else pers / math.sqrt(2.0)


def _split_essentials(diagram):
    finite = [(b, d) for b, d in diagram if not math.isinf(d)]
    births = sorted(b for b, d in diagram if math.isinf(d))
    return finite, births


def _matchings(n, m):
    """Every injective partial matching between ranges n and m."""
    for k in range(min(n, m) + 1):
        for left in combinations(range(n), k):
            for right in permutations(range(m), k):
                yield list(zip(left, right))


def brute_bottleneck(a, b, metric="linf"):
    fa, ea = _split_essentials(a)
    fb, eb = _split_essentials(b)
    if len(ea) != len(eb):
        return math.inf
    floor = max((abs(x - y) for x, y in zip(ea, eb)), default=0.0)
    best = math.inf
    for matching in _matchings(len(fa), len(fb)):
        used_a = {i for i, _ in matching}
        used_b = {j for _, j in matching}
        cost = floor
        for i, j in matching:
            cost = max(cost, _dist(fa[i], fb[j], metric))
        for i in range(len(fa)):
            if i not in used_a:
                cost = max(cost, _diag(fa[i], metric))
        for j in range(len(fb)):
            if j not in used_b:
                cost = max(cost, _diag(fb[j], metric))
        best = min(best, cost)
    return best if (fa or fb) else floor


def brute_wasserstein(a, b, p=1.0, metric="linf"):
    fa, ea = _split_essentials(a)
    fb, eb = _split_essentials(b)
    if len(ea) != len(eb):
        return math.inf
    base = sum(abs(x - y) ** p for x, y in zip(ea, eb))
    best = math.inf
    for matching in _matchings(len(fa), len(fb)):
        used_a = {i for i, _ in matching}
        used_b = {j for _, j in matching}
        cost = base
        for i, j in matching:
            cost += _dist(fa[i], fb[j], metric) ** p
        cost += sum(_diag(fa[i], metric) ** p
                    for i in range(len(fa)) if i not in used_a)
        cost += sum(_diag(fb[j], metric) ** p
                    for j in range(len(fb)) if j not in used_b)
        best = min(best, cost)
    if not (fa or fb):
        best = base
    return best ** (1.0 / p)


def brute_min_enclosing_circle(points):
    """Smallest circle through every pair and triple; O(n^3) but exact."""
    pts = [tuple(map(float, p)) for p in points]

    def covers(cx, cy, r):
        rr = r + 1e-9 * max(r, 1.0)
        return all((x - cx) ** 2 + (y - cy) ** 2 <= rr * rr for x, y in pts)

    best = None
    if len(pts) == 1:
        return (pts[0][0], pts[0][1], 0.0)
    for (x1, y1), (x2, y2) in combinations(pts, 2):
        cx, cy = (x1 + x2) / 2, (y1 + y2) / 2
        r = math.hypot(x1 - cx, y1 - cy)
        if covers(cx, cy, r) and (best is None or r < best[2]):
            best = (cx, cy, r)
    for (x1, y1), (x2, y2), (x3, y3) in combinations(pts, 3):
        d = 2 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
        if abs(d) < 1e-14:
            continue
        ux = ((x1 ** 2 + y1 ** 2) * (y2 - y3) + (x2 ** 2 + y2 ** 2) * (y3 - y1)
              + (x3 ** 2 + y3 ** 2) * (y1 - y2)) / d
        uy = ((x1 ** 2 + y1 ** 2) * (x3 - x2) + (x2 ** 2 + y2 ** 2) * (x1 - x3)
              + (x3 ** 2 + y3 ** 2) * (x2 - x1)) / d
        r = math.hypot(x1 - ux, y1 - uy)
        if covers(ux, uy, r) and (best is None or r < best[2]):
            best = (ux, uy, r)
    return best


def t_sf_quadrature(t, df):
    """P(T > t) for Student's t by adaptive Simpson on the density.

    Integrates from 0 to t and uses symmetry: P(T > t) = 1/2 - integral.
    Density normalization via lgamma keeps large df stable.
    """
    if t < 0:
        return 1.0 - t_sf_quadrature(-t, df)
    c = math.exp(math.lgamma((df + 1) / 2.0) - math.lgamma(df / 2.0)) \
        / math.sqrt(df * math.pi)

    def pdf(x):
        return c * (1.0 + x * x / df) ** (-(df + 1) / 2.0)

    def simpson(f, lo, hi):
        mid = (lo + hi) / 2.0
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi))

    def adaptive(f, lo, hi, whole, tol, depth):
        mid = (lo + hi) / 2.0
        left = simpson(f, lo, mid)
        right = simpson(f, mid, hi)
        if depth <= 0 or abs(left + right - whole) < 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return adaptive(f, lo, mid, left, tol / 2.0, depth - 1) \
            + adaptive(f, mid, hi, right, tol / 2.0, depth - 1)

    if t == 0:
        return 0.5
    integral = adaptive(pdf, 0.0, t, simpson(pdf, 0.0, t), 1e-13, 60)
    return 0.5 - integral


def paired_t_pvalue_quadrature(t, df):
    """Two-sided p-value from the quadrature survival function."""
    return 2.0 * t_sf_quadrature(abs(t), df)
