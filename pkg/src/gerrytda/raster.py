"""Rasterization of voting maps into labeled grids and margin fields.

A unit claims a pixel when the pixel center lies inside its polygon under the
same half-open membership rule as geometry.point_in_polygon, so a partition
of the plane rasterizes to a partition of the pixels. The fill itself is a
scanline sweep per unit rather than a per-pixel query; both routes agree by
construction and a test pins that.

Internally row 0 is the bottom of the grid (y = origin.y); PGM output flips
rows so images come out right side up.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import MarginError, ParameterError, RasterError
from .geometry import Bounds, Point2, PolygonSet, UnitCollection, VotingUnit, polygon_area

BACKGROUND = -1


@dataclass(frozen=True)
class Grid:
    width: int
    height: int
    origin: Point2
    pixel_size: float

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ParameterError("grid dimensions must be positive")
        if not (self.pixel_size > 0 and math.isfinite(self.pixel_size)):
            raise ParameterError("pixel size must be positive and finite")

    def center(self, col: int, row: int) -> Point2:
        return Point2(self.origin.x + (col + 0.5) * self.pixel_size,
                      self.origin.y + (row + 0.5) * self.pixel_size)

    def centers_x(self) -> np.ndarray:
        return self.origin.x + (np.arange(self.width) + 0.5) * self.pixel_size

    def centers_y(self) -> np.ndarray:
        return self.origin.y + (np.arange(self.height) + 0.5) * self.pixel_size


class MarginMode(Enum):
    RELATIVE = "relative"
    DENSITY = "density"


@dataclass(frozen=True)
class LabelRaster:
    grid: Grid
    labels: np.ndarray          # int32 (height, width), BACKGROUND where unclaimed
    unit_ids: tuple[str, ...]   # label value -> unit id

    def pixel_counts(self) -> np.ndarray:
        counts = np.bincount(self.labels[self.labels >= 0].ravel(),
                             minlength=len(self.unit_ids))
        return counts


@dataclass(frozen=True)
class MarginField:
    grid: Grid
    values: np.ndarray      # float64 in [-1, 1], 0 where background
    background: np.ndarray  # bool, True where no unit claims the pixel
    mode: MarginMode
    normalizer: float = 1.0  # max |density| divided out in density mode


def unit_margin(unit: VotingUnit, mode: MarginMode = MarginMode.RELATIVE) -> float:
    """Signed margin of one unit; positive means more Democratic votes."""
    diff = unit.dem_votes - unit.rep_votes
    if mode is MarginMode.RELATIVE:
        total = unit.total_votes
        if total == 0:
            raise MarginError(f"unit {unit.id}: zero total votes")
        return diff / total
    return diff / polygon_area(unit.geometry)


def _fill_unit(labels: np.ndarray, grid: Grid, geom: PolygonSet, value: int) -> None:
    # gather every ring edge of the unit; even-odd over all rings handles holes
    segs = []
    for ring in geom.rings():
        v = ring.vertices
        segs.append(np.c_[v, np.roll(v, -1, axis=0)])
    e = np.vstack(segs)  # columns: x1 y1 x2 y2
    x1, y1, x2, y2 = e[:, 0], e[:, 1], e[:, 2], e[:, 3]

    s = grid.pixel_size
    oy = grid.origin.y
    ox = grid.origin.x
    b = geom.bounds
    r0 = max(0, int(math.ceil((b.miny - oy) / s - 0.5)))
    r1 = min(grid.height - 1, int(math.floor((b.maxy - oy) / s - 0.5)))
    for row in range(r0, r1 + 1):
        py = oy + (row + 0.5) * s
        straddle = (y1 >= py) != (y2 >= py)
        if not straddle.any():
            continue
        xs = x1[straddle] + (py - y1[straddle]) * (x2[straddle] - x1[straddle]) \
            / (y2[straddle] - y1[straddle])
        xs.sort()
        for k in range(0, len(xs) - 1, 2):
            i0 = int(math.ceil((xs[k] - ox) / s - 0.5))
            i1 = int(math.ceil((xs[k + 1] - ox) / s - 0.5)) - 1
            if i1 < 0 or i0 > grid.width - 1:
                continue
            labels[row, max(i0, 0):min(i1, grid.width - 1) + 1] = value


def rasterize(units: UnitCollection, width: int, bounds: Bounds | None = None) -> LabelRaster:
    """Label a width-pixel grid by unit membership of pixel centers.

    Height follows from the aspect ratio of the bounds (the collection's own
    bounding box unless an explicit shared one is given).
    """
    if width < 1:
        raise ParameterError(f"width must be positive, got {width}")
    if len(units) == 0:
        raise RasterError("empty unit collection")
    if bounds is None:
        bounds = units.bounds
    if bounds.width <= 0 or bounds.height <= 0:
        raise RasterError("bounds have no extent")
    pixel_size = bounds.width / width
    height = max(1, int(math.ceil(bounds.height / pixel_size - 1e-12)))
    grid = Grid(width, height, Point2(bounds.minx, bounds.miny), pixel_size)
    labels = np.full((height, width), BACKGROUND, dtype=np.int32)
    for idx, unit in enumerate(units):
        _fill_unit(labels, grid, unit.geometry, idx)
    labels.setflags(write=False)
    return LabelRaster(grid, labels, tuple(u.id for u in units))


def margin_field(raster: LabelRaster, units: UnitCollection,
                 mode: MarginMode = MarginMode.RELATIVE) -> MarginField:
    """Spread per-unit margins over the raster.

    Density mode divides the vote difference by unit area and then normalizes
    the whole field by its maximum absolute value (over units that actually
    claimed pixels), so values stay in [-1, 1] in both modes.
    """
    if isinstance(mode, str):
        mode = MarginMode(mode)
    labels = raster.labels
    present = np.unique(labels)
    present = present[present >= 0]
    margins = np.zeros(len(units), dtype=np.float64)
    for idx in present:
        margins[idx] = unit_margin(units[int(idx)], mode)
    normalizer = 1.0
    if mode is MarginMode.DENSITY:
        normalizer = float(np.max(np.abs(margins[present]))) if len(present) else 0.0
        if normalizer > 0:
            margins = margins / normalizer
    background = labels == BACKGROUND
    values = np.where(background, 0.0, margins[np.where(background, 0, labels)])
    values.setflags(write=False)
    background.setflags(write=False)
    return MarginField(raster.grid, values, background, mode, normalizer)


# === PGM interchange ===
#
# Margin fields travel as 16-bit big-endian P5 PGM plus a JSON sidecar with
# the georeferencing and a run-length encoded background mask. Pixel order in
# both the PGM payload and the RLE is the file order: top row first.

def _encode_u16(values: np.ndarray) -> np.ndarray:
    return np.round((values + 1.0) / 2.0 * 65535.0).astype(np.uint16)


def _rle_encode(flat: np.ndarray) -> dict:
    flat = flat.astype(np.uint8)
    if flat.size == 0:
        return {"first": 0, "runs": []}
    change = np.flatnonzero(np.diff(flat)) + 1
    edges = np.concatenate(([0], change, [flat.size]))
    return {"first": int(flat[0]), "runs": np.diff(edges).tolist()}


def _rle_decode(enc: dict, size: int) -> np.ndarray:
    out = np.empty(size, dtype=bool)
    val = bool(enc["first"])
    pos = 0
    for run in enc["runs"]:
        out[pos:pos + run] = val
        pos += run
        val = not val
    if pos != size:
        raise RasterError("background mask length mismatch")
    return out


def write_margin_pgm(field: MarginField, pgm_path: str | Path,
                     sidecar_path: str | Path | None = None) -> None:
    pgm_path = Path(pgm_path)
    flipped = field.values[::-1]  # file order: top row first
    data = _encode_u16(flipped)
    header = f"P5\n{field.grid.width} {field.grid.height}\n65535\n".encode("ascii")
    pgm_path.write_bytes(header + data.astype(">u2").tobytes())
    if sidecar_path is None:
        sidecar_path = pgm_path.with_suffix(".json")
    sidecar = {
        "width": field.grid.width,
        "height": field.grid.height,
        "origin": [field.grid.origin.x, field.grid.origin.y],
        "pixel_size": field.grid.pixel_size,
        "mode": field.mode.value,
        "normalizer": field.normalizer,
        "background_mask": _rle_encode(field.background[::-1].ravel()),
    }
    Path(sidecar_path).write_text(json.dumps(sidecar, sort_keys=True))


def read_margin_pgm(pgm_path: str | Path,
                    sidecar_path: str | Path | None = None) -> MarginField:
    pgm_path = Path(pgm_path)
    if sidecar_path is None:
        sidecar_path = pgm_path.with_suffix(".json")
    raw = pgm_path.read_bytes()
    fields = raw.split(maxsplit=4)
    if fields[0] != b"P5":
        raise RasterError("not a P5 PGM file")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 65535:
        raise RasterError(f"expected 16-bit PGM, maxval {maxval}")
    data = np.frombuffer(fields[4][:w * h * 2], dtype=">u2").reshape(h, w)
    meta = json.loads(Path(sidecar_path).read_text())
    if (meta["width"], meta["height"]) != (w, h):
        raise RasterError("sidecar dimensions do not match PGM")
    values = data.astype(np.float64) / 65535.0 * 2.0 - 1.0
    background = _rle_decode(meta["background_mask"], w * h).reshape(h, w)
    values = np.where(background, 0.0, values)[::-1].copy()
    background = background[::-1].copy()
    grid = Grid(w, h, Point2(meta["origin"][0], meta["origin"][1]), meta["pixel_size"])
    values.setflags(write=False)
    background.setflags(write=False)
    return MarginField(grid, values, background, MarginMode(meta["mode"]),
                       float(meta.get("normalizer", 1.0)))
