"""Persistence pairing over GF(2) and an independent Betti-number oracle.

The pairing comes from boundary-matrix column reduction (see _reduction).
betti_oracle takes a completely separate route, Gaussian elimination ranks of
the boundary operators at a fixed level, so the two can check each other:
the number of bars alive at level i in dimension k must equal beta_k there.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._reduction import reduce_columns
from .complexes import FilteredComplex
from .errors import ParameterError, StructureError

INF = math.inf


class BoundaryMatrix:
    """Columns of the boundary operator in filtration order."""

    __slots__ = ("dims", "levels", "indptr", "indices")

    def __init__(self, dims: np.ndarray, levels: np.ndarray,
                 columns: Sequence[Iterable[int]]):
        self.dims = np.asarray(dims, dtype=np.int8)
        self.levels = np.asarray(levels, dtype=np.int64)
        n = len(self.dims)
        if len(columns) != n or len(self.levels) != n:
            raise StructureError("column count mismatch")
        indptr = np.zeros(n + 1, dtype=np.int64)
        flat: list[int] = []
        for j, col in enumerate(columns):
            rows = sorted(int(r) for r in col)
            for r in rows:
                if r < 0 or r >= j:
                    raise StructureError(f"column {j}: row {r} not strictly earlier")
            flat.extend(rows)
            indptr[j + 1] = len(flat)
        self.indptr = indptr
        self.indices = np.asarray(flat, dtype=np.int64)

    @classmethod
    def from_complex(cls, cx: FilteredComplex) -> "BoundaryMatrix":
        bm = cls.__new__(cls)
        bm.dims = cx.dims
        bm.levels = cx.levels
        bm.indptr = cx.indptr
        bm.indices = cx.indices
        return bm

    def __len__(self) -> int:
        return len(self.dims)

    def column(self, j: int) -> np.ndarray:
        return self.indices[self.indptr[j]:self.indptr[j + 1]]


@dataclass(frozen=True)
class Reduction:
    """Outcome of the column reduction: pairing plus reduced death columns."""

    pairs: tuple[tuple[int, int], ...]      # (birth cell, death cell)
    essential: tuple[int, ...]              # unpaired cells, classes live forever
    _col_start: np.ndarray
    _col_len: np.ndarray
    _pool: np.ndarray
    n: int

    def reduced_column(self, j: int) -> np.ndarray:
        """Reduced form of column j (empty for births and essentials)."""
        if self._col_len[j] < 0:
            return np.empty(0, dtype=np.int64)
        s = self._col_start[j]
        return self._pool[s:s + self._col_len[j]]

    def low(self, j: int) -> int:
        col = self.reduced_column(j)
        return int(col[-1]) if len(col) else -1


def reduce(matrix: BoundaryMatrix, use_clearing: bool = True) -> Reduction:
    """Reduce the boundary matrix; every column ends zero or with unique low."""
    pairs, is_zero, pivot_owner, col_start, col_len, pool = reduce_columns(
        matrix.indptr, matrix.indices, matrix.dims, use_clearing)
    essential = np.flatnonzero(is_zero & (pivot_owner == -1))
    pair_list = tuple(sorted((int(r), int(c)) for r, c in pairs))
    return Reduction(pair_list, tuple(int(i) for i in essential),
                     col_start, col_len, pool, len(matrix))


@dataclass(frozen=True, order=True)
class PersistencePair:
    dim: int
    birth: int
    death: float  # level index, or math.inf for essential classes

    @property
    def essential(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class Barcode:
    pairs: tuple[PersistencePair, ...]
    num_levels: int
    thresholds: tuple[float, ...] | None = None

    def bars(self, dim: int) -> tuple[PersistencePair, ...]:
        return tuple(p for p in self.pairs if p.dim == dim)

    def alive(self, level: int, dim: int) -> int:
        return sum(1 for p in self.pairs
                   if p.dim == dim and p.birth <= level < p.death)

    def _to_value(self, level: float) -> float:
        if math.isinf(level):
            return INF
        if self.thresholds is None:
            return float(level)
        return self.thresholds[int(level) - 1]

    def diagram(self, dim: int) -> list[tuple[float, float]]:
        """Bars of one dimension as (birth, death) in threshold units."""
        return [(self._to_value(p.birth), self._to_value(p.death))
                for p in self.bars(dim)]

    def to_json(self, level_units: bool = False) -> dict:
        if level_units or self.thresholds is None:
            conv = float
        else:
            conv = self._to_value
        out_pairs = []
        for p in self.pairs:
            death = "inf" if p.essential else conv(p.death)
            out_pairs.append({"dim": p.dim, "birth": conv(p.birth), "death": death})
        doc = {"num_levels": self.num_levels, "pairs": out_pairs}
        if level_units or self.thresholds is None:
            doc["units"] = "level"
        return doc

    def dumps(self, level_units: bool = False) -> str:
        return json.dumps(self.to_json(level_units), sort_keys=True)


def read_barcode_json(doc: dict | str) -> tuple[dict[int, list[tuple[float, float]]], int]:
    """Barcode JSON to per-dimension diagrams (in the units the file used)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    diagrams: dict[int, list[tuple[float, float]]] = {}
    for p in doc["pairs"]:
        death = INF if p["death"] == "inf" else float(p["death"])
        diagrams.setdefault(int(p["dim"]), []).append((float(p["birth"]), death))
    return diagrams, int(doc["num_levels"])


def barcode(cx: FilteredComplex, use_clearing: bool = True) -> Barcode:
    """Persistence barcode of a filtered complex; zero-length bars dropped."""
    red = reduce(BoundaryMatrix.from_complex(cx), use_clearing)
    levels = cx.levels
    dims = cx.dims
    out = []
    for i, j in red.pairs:
        birth, death = int(levels[i]), int(levels[j])
        if birth < death:
            out.append(PersistencePair(int(dims[i]), birth, death))
    for i in red.essential:
        out.append(PersistencePair(int(dims[i]), int(levels[i]), INF))
    return Barcode(tuple(sorted(out)), cx.num_levels, cx.thresholds)


# === independent Betti oracle ===

def _gf2_rank(m: np.ndarray) -> int:
    """Rank over GF(2) by destructive row elimination on a uint8 copy."""
    if m.size == 0:
        return 0
    m = m.copy()
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        hits = np.flatnonzero(m[rank:, c])
        if len(hits) == 0:
            continue
        p = rank + int(hits[0])
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = np.flatnonzero(m[rank + 1:, c]) + rank + 1
        if len(below):
            m[below] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def betti_oracle(cx: FilteredComplex, level: int) -> tuple[int, int, int]:
    """(beta_0, beta_1, beta_2) of the subcomplex at a level, by GF(2) ranks.

    beta_k = dim ker boundary_k - rank boundary_{k+1}; independent of the
    persistence reduction so the two can be cross-checked.
    """
    if level < 0:
        raise ParameterError("level must be non-negative")
    active = np.flatnonzero(cx.levels <= level)
    if len(active) == 0:
        return (0, 0, 0)
    pos = np.full(len(cx), -1, dtype=np.int64)
    dims = cx.dims
    counts = [0, 0, 0]
    for cell in active:
        d = int(dims[cell])
        pos[cell] = counts[d]
        counts[d] += 1
    n0, n1, n2 = counts

    d1 = np.zeros((n0, n1), dtype=np.uint8)
    d2 = np.zeros((n1, n2), dtype=np.uint8)
    for cell in active:
        d = int(dims[cell])
        if d == 0:
            continue
        target = d1 if d == 1 else d2
        for face in cx.boundary(int(cell)):
            target[pos[face], pos[cell]] ^= 1
    r1 = _gf2_rank(d1)
    r2 = _gf2_rank(d2)
    return (n0 - r1, (n1 - r1) - r2, n2 - r2)


@dataclass(frozen=True)
class BettiProfile:
    """Betti numbers at every level of the sweep, 1-indexed like the levels."""

    betti: tuple[tuple[int, int, int], ...]

    def at(self, level: int) -> tuple[int, int, int]:
        return self.betti[level - 1]


def betti_profile(cx: FilteredComplex) -> BettiProfile:
    return BettiProfile(tuple(betti_oracle(cx, lv)
                              for lv in range(1, cx.num_levels + 1)))
