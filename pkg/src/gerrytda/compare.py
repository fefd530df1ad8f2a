"""Distances between persistence diagrams: bottleneck, Wasserstein, total persistence.

A diagram is a sequence of (birth, death) pairs for one homology dimension;
death may be inf. Infinite-death points are matched only among themselves, in
sorted birth order, and a count mismatch makes the distance inf. Finite
points may match each other or project to the diagonal.

The ground metric is L-infinity by default (diagonal projection then costs
half the persistence); L2 is available behind a flag. Bottleneck is exact:
binary search over the candidate cost set with an augmenting-path matching
feasibility test. Wasserstein solves the diagonal-augmented assignment
problem exactly.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ParameterError

INF = math.inf

Diagram = Sequence[tuple[float, float]]


def _split(diagram: Diagram) -> tuple[np.ndarray, list[float]]:
    finite = []
    essential_births = []
    for b, d in diagram:
        if math.isinf(d):
            essential_births.append(float(b))
        else:
            if not d > b:
                raise ParameterError(f"diagram point ({b}, {d}) has death <= birth")
            finite.append((float(b), float(d)))
    pts = np.asarray(finite, dtype=np.float64).reshape(-1, 2)
    return pts, sorted(essential_births)


def _ground_distances(a: np.ndarray, b: np.ndarray, metric: str) -> np.ndarray:
    diff = np.abs(a[:, None, :] - b[None, :, :])
    if metric == "linf":
        return diff.max(axis=2)
    return np.sqrt((diff ** 2).sum(axis=2))


def _diag_cost(pts: np.ndarray, metric: str) -> np.ndarray:
    pers = pts[:, 1] - pts[:, 0]
    return pers / 2.0 if metric == "linf" else pers / math.sqrt(2.0)


def _check_metric(metric: str) -> None:
    if metric not in ("linf", "l2"):
        raise ParameterError(f"unknown ground metric {metric!r}")


def _feasible(cross: np.ndarray, diag_a: np.ndarray, diag_b: np.ndarray,
              c: float) -> bool:
    """Perfect matching at threshold c in the diagonal-augmented graph?

    Left side: a-points then |b| diagonal slots; right side: b-points then
    |a| diagonal slots. Kuhn's augmenting paths; sizes here are tiny.
    """
    n, m = cross.shape
    a_diag = diag_a <= c
    b_diag = diag_b <= c
    ok = cross <= c

    size = n + m
    match_right = np.full(size, -1, dtype=np.int64)

    def neighbors(left: int) -> Iterable[int]:
        if left < n:
            yield from np.flatnonzero(ok[left])
            if a_diag[left]:
                yield from range(m, size)
        else:
            yield from np.flatnonzero(b_diag)
            yield from range(m, size)

    def augment(left: int, seen: np.ndarray) -> bool:
        for right in neighbors(left):
            if seen[right]:
                continue
            seen[right] = True
            if match_right[right] < 0 or augment(match_right[right], seen):
                match_right[right] = left
                return True
        return False

    matched = 0
    for left in range(size):
        if augment(left, np.zeros(size, dtype=bool)):
            matched += 1
    return matched == size


def _essential_bottleneck(ea: list[float], eb: list[float]) -> float:
    if len(ea) != len(eb):
        return INF
    if not ea:
        return 0.0
    return max(abs(x - y) for x, y in zip(ea, eb))


def bottleneck(a: Diagram, b: Diagram, metric: str = "linf") -> float:
    """Smallest achievable worst-point cost over all matchings."""
    _check_metric(metric)
    pa, ea = _split(a)
    pb, eb = _split(b)
    value = _essential_bottleneck(ea, eb)
    if math.isinf(value):
        return INF
    if len(pa) == 0 and len(pb) == 0:
        return value

    cross = _ground_distances(pa, pb, metric)
    diag_a = _diag_cost(pa, metric)
    diag_b = _diag_cost(pb, metric)
    candidates = np.unique(np.concatenate([
        cross.ravel(), diag_a, diag_b, [0.0, value]]))
    # smallest feasible candidate; feasibility is monotone in c
    lo, hi = 0, len(candidates) - 1
    if not _feasible(cross, diag_a, diag_b, candidates[hi]):
        raise AssertionError("matching must be feasible at the max candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cross, diag_a, diag_b, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(float(candidates[lo]), value)


def wasserstein(a: Diagram, b: Diagram, p: float = 1.0,
                metric: str = "linf") -> float:
    """p-Wasserstein distance with diagonal augmentation, exact assignment."""
    _check_metric(metric)
    if p < 1:
        raise ParameterError(f"norm order must be >= 1, got {p}")
    pa, ea = _split(a)
    pb, eb = _split(b)
    if len(ea) != len(eb):
        return INF
    total = sum(abs(x - y) ** p for x, y in zip(ea, eb))

    n, m = len(pa), len(pb)
    if n or m:
        size = n + m
        cost = np.zeros((size, size), dtype=np.float64)
        if n and m:
            cost[:n, :m] = _ground_distances(pa, pb, metric) ** p
        if n:
            cost[:n, m:] = _diag_cost(pa, metric)[:, None] ** p
        if m:
            cost[n:, :m] = _diag_cost(pb, metric)[None, :] ** p
        rows, cols = linear_sum_assignment(cost)
        total += float(cost[rows, cols].sum())
    return total ** (1.0 / p)


def total_persistence(a: Diagram, p: float = 1.0,
                      max_death: float | None = None) -> float:
    """Sum of (death - birth)^p; infinite deaths substitute max_death."""
    if p < 1:
        raise ParameterError(f"norm order must be >= 1, got {p}")
    finite_deaths = [d for _, d in a if not math.isinf(d)]
    if max_death is not None and finite_deaths and max(finite_deaths) > max_death:
        raise ParameterError(
            f"max_death {max_death} is below a finite death {max(finite_deaths)}")
    total = 0.0
    for b, d in a:
        if math.isinf(d):
            if max_death is None:
                raise ParameterError("diagram has infinite deaths; pass max_death")
            d = max_death
        total += (d - b) ** p
    return total


def distance_matrix(labels: Sequence[str], diagrams: Sequence[Diagram],
                    dist: Callable[[Diagram, Diagram], float] = bottleneck) -> np.ndarray:
    """Symmetric pairwise distances, zero diagonal."""
    if len(labels) != len(diagrams):
        raise ParameterError("labels and diagrams differ in length")
    n = len(labels)
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = dist(diagrams[i], diagrams[j])
    return out


def matrix_to_csv(labels: Sequence[str], matrix: np.ndarray) -> str:
    """Distance matrix as CSV with a label header row and column."""
    lines = ["," + ",".join(labels)]
    for lab, row in zip(labels, np.asarray(matrix)):
        cells = ["inf" if math.isinf(x) else repr(float(x)) for x in row]
        lines.append(lab + "," + ",".join(cells))
    return "\n".join(lines) + "\n"
