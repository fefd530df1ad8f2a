"""Filtered cell complexes over margin fields and unit adjacency.

Two constructions feed the persistence machinery:

* a cubical level-set filtration of a rasterized margin field (pixels are
  vertices, 4-neighbor edges, 2x2 squares; each cell enters at the max level
  of its pixels), modeling a Republican "sea" flooding Democratic islands as
  the margin threshold rises;
* a flag filtration of the unit adjacency graph under a descending win-margin
  sweep, with triangles filled for mutually adjacent triples.

Cells are stored columnar (dims, levels, boundary CSR) and globally ordered
by (level, dim, insertion id), which is the filtration order the reduction
consumes. A vertex that would only enter above the top threshold is excluded
entirely, so classes it blocks run to infinity.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ComplexError, MarginError, ParameterError, StructureError
from .geometry import UnitCollection
from .raster import MarginField

# vertex activation level for pixels that never enter the sweep
_EXCLUDED = -1


@dataclass(frozen=True)
class LevelSchedule:
    """Strictly increasing thresholds tau_1 < ... < tau_L in (0, 1]."""

    thresholds: tuple[float, ...]

    def __post_init__(self):
        t = self.thresholds
        if len(t) < 2:
            raise ParameterError("schedule needs at least 2 levels")
        if any(not (0.0 < x <= 1.0) for x in t):
            raise ParameterError("thresholds must lie in (0, 1]")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise ParameterError("thresholds must be strictly increasing")

    @property
    def num_levels(self) -> int:
        return len(self.thresholds)

    @property
    def max_margin(self) -> float:
        return self.thresholds[-1]


def uniform_schedule(levels: int, max_margin: float = 1.0) -> LevelSchedule:
    """Evenly spaced thresholds i * max_margin / levels for i = 1..levels."""
    if levels < 2:
        raise ParameterError(f"need at least 2 levels, got {levels}")
    if not (0.0 < max_margin <= 1.0):
        raise ParameterError(f"max margin must be in (0, 1], got {max_margin}")
    return LevelSchedule(tuple(i * max_margin / levels for i in range(1, levels + 1)))


@dataclass(frozen=True)
class Cell:
    id: int
    dim: int
    level: int
    boundary: tuple[int, ...]


class FilteredComplex:
    """Cells sorted by (level, dim, id) with boundaries in CSR form."""

    __slots__ = ("dims", "levels", "indptr", "indices", "num_levels", "thresholds")

    def __init__(self, dims: np.ndarray, levels: np.ndarray, indptr: np.ndarray,
                 indices: np.ndarray, num_levels: int,
                 thresholds: tuple[float, ...] | None = None):
        self.dims = dims
        self.levels = levels
        self.indptr = indptr
        self.indices = indices
        self.num_levels = int(num_levels)
        self.thresholds = thresholds
        self._validate()

    @classmethod
    def from_cells(cls, cells: Sequence[tuple[int, int, Iterable[int]]],
                   num_levels: int | None = None,
                   thresholds: tuple[float, ...] | None = None) -> "FilteredComplex":
        """Build from (dim, level, boundary ids) triples given in id order.

        Boundary ids refer to positions in the input sequence; the
        constructor re-sorts everything into filtration order.
        """
        n = len(cells)
        dims = np.fromiter((c[0] for c in cells), dtype=np.int8, count=n)
        levels = np.fromiter((c[1] for c in cells), dtype=np.int64, count=n)
        perm = np.lexsort((np.arange(n), dims, levels))
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        chunks = []
        for new_id, old_id in enumerate(perm):
            b = np.sort(inv[np.fromiter(cells[old_id][2], dtype=np.int64)]) \
                if cells[old_id][2] else np.empty(0, dtype=np.int64)
            chunks.append(b)
            indptr[new_id + 1] = indptr[new_id] + len(b)
        indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
        if num_levels is None:
            num_levels = int(levels.max(initial=1))
        return cls(dims[perm], levels[perm], indptr, indices, num_levels, thresholds)

    def _validate(self):
        n = len(self.dims)
        if n == 0:
            raise ComplexError("empty complex: no cells")
        if len(self.levels) != n or len(self.indptr) != n + 1:
            raise StructureError("inconsistent array lengths")
        lv = self.levels
        if np.any(lv[1:] < lv[:-1]):
            raise StructureError("cells not sorted by level")
        same = lv[1:] == lv[:-1]
        if np.any(self.dims[1:][same] < self.dims[:-1][same]):
            raise StructureError("cells not sorted by dim within level")
        lens = np.diff(self.indptr)
        ok = ((self.dims == 0) & (lens == 0)) | ((self.dims == 1) & (lens == 2)) \
            | ((self.dims == 2) & ((lens == 3) | (lens == 4)))
        if not np.all(ok):
            raise StructureError("boundary size does not match cell dimension")
        if len(self.indices):
            if self.indices.min() < 0 or self.indices.max() >= n:
                raise StructureError("boundary references a missing cell")
            col = np.repeat(np.arange(n), lens)
            if np.any(self.indices >= col):
                raise StructureError("boundary face does not precede its cell")
            if np.any(self.dims[self.indices] != self.dims[col] - 1):
                raise StructureError("boundary face has wrong dimension")
            if np.any(self.levels[self.indices] > self.levels[col]):
                raise StructureError("boundary face enters after its cell")

    def __len__(self) -> int:
        return len(self.dims)

    def boundary(self, cell_id: int) -> np.ndarray:
        return self.indices[self.indptr[cell_id]:self.indptr[cell_id + 1]]

    def cell(self, cell_id: int) -> Cell:
        return Cell(cell_id, int(self.dims[cell_id]), int(self.levels[cell_id]),
                    tuple(int(i) for i in self.boundary(cell_id)))

    def cells(self) -> Iterable[Cell]:
        return (self.cell(i) for i in range(len(self)))

    def active_counts(self, level: int) -> tuple[int, int, int]:
        """Cells of each dimension present at or below the given level."""
        mask = self.levels <= level
        return tuple(int(np.count_nonzero(mask & (self.dims == d))) for d in (0, 1, 2))

    def euler_characteristic(self, level: int) -> int:
        v, e, f = self.active_counts(level)
        return v - e + f

    def dump(self, fp) -> None:
        """Debug format: one line per cell in filtration order."""
        for c in self.cells():
            b = " ".join(str(i) for i in c.boundary)
            fp.write(f"cell {c.id} dim {c.dim} level {c.level} boundary {b}".rstrip() + "\n")


# === cubical level-set filtration ===

def _vertex_levels(values: np.ndarray, background: np.ndarray,
                   schedule: LevelSchedule, polarity: str) -> np.ndarray:
    if polarity not in ("democratic", "republican"):
        raise ParameterError(f"unknown polarity {polarity!r}")
    work = values if polarity == "democratic" else -values
    t = np.asarray(schedule.thresholds)
    L = schedule.num_levels
    # smallest i with tau_i >= value; the sea (<= 0) floods at level 1;
    # values at or above the top threshold never enter
    lv = np.searchsorted(t, work, side="left") + 1
    lv = np.where(work <= 0.0, 1, lv)
    lv = np.where(work >= t[-1], _EXCLUDED, lv)
    lv = np.where(background, _EXCLUDED, lv)
    return lv.astype(np.int64)


def build_levelset_filtration(field: MarginField, schedule: LevelSchedule,
                              polarity: str = "democratic") -> FilteredComplex:
    """Cubical filtration of the margin field under the threshold sweep.

    Pixels are vertices entering at their activation level, edges join
    4-neighbors at the max of their endpoints, squares fill 2x2 blocks at the
    max of their corners. Pixels that never activate (background, or margin
    at or above the top threshold) contribute no cells at all.
    """
    lv = _vertex_levels(field.values, field.background, schedule, polarity)
    active = lv != _EXCLUDED
    if not active.any():
        raise ComplexError("empty complex: all pixels background or never active")
    h, w = lv.shape

    vid = np.full((h, w), -1, dtype=np.int64)
    vid[active] = np.arange(int(active.sum()))
    v_levels = lv[active]
    nv = len(v_levels)

    # horizontal edges (r,c)-(r,c+1), vertical edges (r,c)-(r+1,c)
    hmask = active[:, :-1] & active[:, 1:]
    vmask = active[:-1, :] & active[1:, :]
    h_u, h_v = vid[:, :-1][hmask], vid[:, 1:][hmask]
    h_lv = np.maximum(lv[:, :-1][hmask], lv[:, 1:][hmask])
    v_u, v_v = vid[:-1, :][vmask], vid[1:, :][vmask]
    v_lv = np.maximum(lv[:-1, :][vmask], lv[1:, :][vmask])
    ne_h, ne_v = len(h_lv), len(v_lv)
    ne = ne_h + ne_v

    # edge id lookup tables for square boundaries
    h_id = np.full((h, max(w - 1, 0)), -1, dtype=np.int64)
    h_id[hmask] = nv + np.arange(ne_h)
    v_id = np.full((max(h - 1, 0), w), -1, dtype=np.int64)
    v_id[vmask] = nv + ne_h + np.arange(ne_v)

    smask = active[:-1, :-1] & active[:-1, 1:] & active[1:, :-1] & active[1:, 1:]
    s_lv = np.maximum.reduce([lv[:-1, :-1][smask], lv[:-1, 1:][smask],
                              lv[1:, :-1][smask], lv[1:, 1:][smask]])
    s_b = np.column_stack([
        h_id[:-1, :][smask],       # bottom edge
        v_id[:, :-1][smask],       # left edge
        v_id[:, 1:][smask],        # right edge
        h_id[1:, :][smask],        # top edge
    ])
    ns = len(s_lv)

    dims = np.concatenate([np.zeros(nv, np.int8), np.ones(ne, np.int8),
                           np.full(ns, 2, np.int8)])
    levels = np.concatenate([v_levels,
                             h_lv, v_lv,
                             s_lv]).astype(np.int64)
    edge_pairs = np.concatenate([np.column_stack([h_u, h_v]),
                                 np.column_stack([v_u, v_v])]) \
        if ne else np.empty((0, 2), np.int64)
    lens = np.concatenate([np.zeros(nv, np.int64), np.full(ne, 2, np.int64),
                           np.full(ns, 4, np.int64)])
    flat = np.concatenate([np.sort(edge_pairs, axis=1).ravel(),
                           np.sort(s_b, axis=1).ravel()]) \
        if ne + ns else np.empty(0, np.int64)

    return _sorted_complex(dims, levels, lens, flat,
                           schedule.num_levels, schedule.thresholds)


def _sorted_complex(dims, levels, lens, flat, num_levels, thresholds):
    """Sort cells into (level, dim, id) order and remap boundary indices."""
    n = len(dims)
    perm = np.lexsort((np.arange(n), dims, levels))
    inv = np.empty(n, dtype=np.int64)
    inv[perm] = np.arange(n)
    old_indptr = np.concatenate([[0], np.cumsum(lens)])
    new_lens = lens[perm]
    new_indptr = np.concatenate([[0], np.cumsum(new_lens)])
    if len(flat):
        offsets = np.arange(new_indptr[-1]) - np.repeat(new_indptr[:-1], new_lens)
        src = np.repeat(old_indptr[perm], new_lens) + offsets
        new_flat = inv[flat[src]]
        # keep each boundary list sorted for reproducible dumps
        order = np.argsort(new_flat + np.repeat(np.arange(n), new_lens) * (n + 1),
                           kind="stable")
        new_flat = new_flat[order]
    else:
        new_flat = flat
    return FilteredComplex(dims[perm], levels[perm].astype(np.int64),
                           new_indptr.astype(np.int64), new_flat.astype(np.int64),
                           num_levels, thresholds)


# === unit adjacency ===

def _snap_key(x: float, y: float, tol: float) -> tuple[int, int]:
    return (int(round(x / tol)), int(round(y / tol)))


def _edge_overlap_len(ea: np.ndarray, eb: np.ndarray, tol: float) -> float:
    """Length of collinear overlap between two segments, 0 if not collinear."""
    ax1, ay1, ax2, ay2 = ea
    bx1, by1, bx2, by2 = eb
    dax, day = ax2 - ax1, ay2 - ay1
    la = math.hypot(dax, day)
    if la <= tol:
        return 0.0
    # both endpoints of b must sit on the line through a
    da = abs(dax * (by1 - ay1) - day * (bx1 - ax1)) / la
    db = abs(dax * (by2 - ay1) - day * (bx2 - ax1)) / la
    if da > tol or db > tol:
        return 0.0
    t1 = (dax * (bx1 - ax1) + day * (by1 - ay1)) / la
    t2 = (dax * (bx2 - ax1) + day * (by2 - ay1)) / la
    lo = max(0.0, min(t1, t2))
    hi = min(la, max(t1, t2))
    return hi - lo


def detect_adjacency(units: UnitCollection, kind: str = "queen") -> set[tuple[str, str]]:
    """Symmetric adjacency over unit ids.

    queen: units share a snapped vertex or a collinear boundary segment.
    rook: units share a collinear boundary segment of positive length.
    """
    if kind not in ("queen", "rook"):
        raise ParameterError(f"unknown adjacency kind {kind!r}")
    tol = units.snap_tolerance()
    n = len(units)
    edges_of = []
    boxes = np.empty((n, 4))
    for i, u in enumerate(units):
        segs = []
        for ring in u.geometry.rings():
            v = ring.vertices
            segs.append(np.c_[v, np.roll(v, -1, axis=0)])
        edges_of.append(np.vstack(segs))
        b = u.geometry.bounds
        boxes[i] = (b.minx, b.miny, b.maxx, b.maxy)

    pairs: set[tuple[int, int]] = set()
    if kind == "queen":
        by_vertex: dict[tuple[int, int], list[int]] = {}
        for i, u in enumerate(units):
            keys = {_snap_key(x, y, tol) for ring in u.geometry.rings()
                    for x, y in ring.vertices}
            for k in keys:
                by_vertex.setdefault(k, []).append(i)
        for members in by_vertex.values():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    pairs.add((members[a], members[b]))

    # collinear edge overlap; bbox prefilter keeps the pair loop small
    near = (boxes[:, None, 0] <= boxes[None, :, 2] + tol) & \
           (boxes[None, :, 0] <= boxes[:, None, 2] + tol) & \
           (boxes[:, None, 1] <= boxes[None, :, 3] + tol) & \
           (boxes[None, :, 1] <= boxes[:, None, 3] + tol)
    cand = np.argwhere(np.triu(near, k=1))
    for i, j in cand:
        i, j = int(i), int(j)
        if (i, j) in pairs:
            continue
        done = False
        for ea in edges_of[i]:
            for eb in edges_of[j]:
                if _edge_overlap_len(ea, eb, tol) > tol:
                    pairs.add((i, j))
                    done = True
                    break
            if done:
                break
    ids = [u.id for u in units]
    return {tuple(sorted((ids[i], ids[j]))) for i, j in pairs}


def flag_filtration(vertex_levels: Sequence[int], edges: Iterable[tuple[int, int]],
                    num_levels: int,
                    thresholds: tuple[float, ...] | None = None) -> FilteredComplex:
    """Flag complex up to dimension 2 from per-vertex entry levels.

    A vertex level outside 1..num_levels means the vertex never enters.
    Edge and triangle levels are the max over their vertices.
    """
    lv = np.asarray(vertex_levels, dtype=np.int64)
    included = (lv >= 1) & (lv <= num_levels)
    if not included.any():
        raise ComplexError("empty complex: no vertex ever enters")
    vid = np.full(len(lv), -1, dtype=np.int64)
    vid[included] = np.arange(int(included.sum()))
    nv = int(included.sum())

    adj: dict[int, set[int]] = {i: set() for i in range(nv)}
    edge_list = []
    edge_id: dict[tuple[int, int], int] = {}
    for a, b in edges:
        if a == b or not (included[a] and included[b]):
            continue
        u, v = sorted((int(vid[a]), int(vid[b])))
        if (u, v) in edge_id:
            continue
        edge_id[(u, v)] = nv + len(edge_list)
        edge_list.append((u, v))
        adj[u].add(v)
        adj[v].add(u)

    v_levels = lv[included]
    e_levels = np.array([max(v_levels[u], v_levels[v]) for u, v in edge_list],
                        dtype=np.int64) if edge_list else np.empty(0, np.int64)
    tris = []
    for (u, v), eid in sorted(edge_id.items(), key=lambda kv: kv[1]):
        for w in sorted(adj[u] & adj[v]):
            if w > v:
                tris.append((u, v, w))
    t_levels = np.array([max(v_levels[u], v_levels[v], v_levels[w])
                         for u, v, w in tris], dtype=np.int64) if tris else np.empty(0, np.int64)

    ne, nt = len(edge_list), len(tris)
    dims = np.concatenate([np.zeros(nv, np.int8), np.ones(ne, np.int8),
                           np.full(nt, 2, np.int8)])
    levels = np.concatenate([v_levels, e_levels, t_levels]).astype(np.int64)
    lens = np.concatenate([np.zeros(nv, np.int64), np.full(ne, 2, np.int64),
                           np.full(nt, 3, np.int64)])
    flat_parts = [np.asarray(edge_list, dtype=np.int64).ravel()] if ne else []
    if nt:
        tb = np.array([[edge_id[(u, v)], edge_id[(u, w)], edge_id[(v, w)]]
                       for u, v, w in tris], dtype=np.int64)
        flat_parts.append(tb.ravel())
    flat = np.concatenate(flat_parts) if flat_parts else np.empty(0, np.int64)
    return _sorted_complex(dims, levels, lens, flat, num_levels, thresholds)


def win_margin(dem: int, rep: int, unit_id: str) -> float:
    total = dem + rep
    if total == 0:
        raise MarginError(f"unit {unit_id}: zero total votes")
    return abs(dem - rep) / total


def build_adjacency_filtration(units: UnitCollection, schedule: LevelSchedule,
                               kind: str = "queen",
                               party: str = "republican") -> FilteredComplex:
    """Flag filtration under a descending win-margin sweep.

    Step i admits every unit the chosen party won with margin at least
    tau_{L-i+1}, so the safest seats enter first. Units the other party won,
    ties, and wins below tau_1 never enter.
    """
    if party not in ("republican", "democratic"):
        raise ParameterError(f"unknown party {party!r}")
    L = schedule.num_levels
    t = schedule.thresholds
    levels = []
    for u in units:
        won = u.rep_votes > u.dem_votes if party == "republican" \
            else u.dem_votes > u.rep_votes
        if not won:
            levels.append(_EXCLUDED)
            continue
        delta = win_margin(u.dem_votes, u.rep_votes, u.id)
        k = bisect_right(t, delta)  # thresholds <= delta
        levels.append(L + 1 - k if k >= 1 else _EXCLUDED)
    index = {u.id: i for i, u in enumerate(units)}
    pairs = [(index[a], index[b]) for a, b in sorted(detect_adjacency(units, kind))]
    return flag_filtration(levels, pairs, L, None)
