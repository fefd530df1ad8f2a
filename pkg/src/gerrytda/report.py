"""Pipeline orchestration: one election year in, comparable artifacts out.

run_year chains ingest -> raster -> complex -> persistence -> compare for the
precinct and district layers of a year, on one shared grid so the two
barcodes live on the same threshold axis. write_outputs lays the results
down as barcode JSON, level-set snapshots, SVG plots, distance and
compactness CSVs, and a machine-readable report.json. Every file is written
deterministically: same inputs, same bytes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .compactness import CompactnessRow, paired_t_test, score_units, scores_to_csv
from .compare import bottleneck, matrix_to_csv, total_persistence, wasserstein
from .complexes import (
    LevelSchedule,
    _vertex_levels,
    build_levelset_filtration,
    uniform_schedule,
)
from .errors import GerryTdaError, ParameterError, PipelineError
from .geometry import UnitCollection, UnitKind
from .ingest import JoinReport, join_units, parse_geojson, parse_votes_csv
from .persistence import Barcode, barcode
from .raster import MarginField, MarginMode, margin_field, rasterize


@dataclass(frozen=True)
class AnalysisConfig:
    year: str
    precinct_geo: str
    precinct_votes: str
    district_geo: str
    district_votes: str
    width: int = 1024
    mode: str = "density"
    levels: int = 25
    max_margin: float = 1.0
    polarity: str = "democratic"
    dim: int = 1
    seed: int = 0


@dataclass(frozen=True)
class YearResult:
    year: str
    precinct_barcode: Barcode
    district_barcode: Barcode
    bottleneck_by_dim: dict[int, float]
    wasserstein_by_dim: dict[int, float]
    total_persistence_by_dim: dict[str, dict[int, float]]
    precinct_join: JoinReport
    district_join: JoinReport
    compactness: tuple[CompactnessRow, ...]
    precinct_field: MarginField
    district_field: MarginField
    schedule: LevelSchedule


@contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except (GerryTdaError, OSError, json.JSONDecodeError, KeyError) as exc:
        raise PipelineError(f"{name}: {exc}") from exc


def _load_layer(geo_path: str, votes_path: str,
                kind: UnitKind) -> tuple[UnitCollection, JoinReport]:
    units = parse_geojson(Path(geo_path).read_text(), kind=kind)
    votes = parse_votes_csv(Path(votes_path).read_text())
    return join_units(units, votes)


def run_year(config: AnalysisConfig) -> YearResult:
    """Full precinct-plus-district analysis for one year, deterministically."""
    with _stage("ingest"):
        precincts, p_join = _load_layer(config.precinct_geo, config.precinct_votes,
                                        UnitKind.PRECINCT)
        districts, d_join = _load_layer(config.district_geo, config.district_votes,
                                        UnitKind.DISTRICT)

    with _stage("raster"):
        bounds = precincts.bounds.union(districts.bounds)
        mode = MarginMode(config.mode)
        p_field = margin_field(rasterize(precincts, config.width, bounds),
                               precincts, mode)
        d_field = margin_field(rasterize(districts, config.width, bounds),
                               districts, mode)

    with _stage("complex"):
        schedule = uniform_schedule(config.levels, config.max_margin)
        p_complex = build_levelset_filtration(p_field, schedule, config.polarity)
        d_complex = build_levelset_filtration(d_field, schedule, config.polarity)

    with _stage("persistence"):
        p_barcode = barcode(p_complex)
        d_barcode = barcode(d_complex)

    with _stage("compare"):
        max_death = schedule.max_margin
        bn, ws, tp = {}, {}, {"precinct": {}, "district": {}}
        for dim in range(3):
            pa, da = p_barcode.diagram(dim), d_barcode.diagram(dim)
            bn[dim] = bottleneck(pa, da)
            ws[dim] = wasserstein(pa, da, p=1)
            tp["precinct"][dim] = total_persistence(pa, p=1, max_death=max_death)
            tp["district"][dim] = total_persistence(da, p=1, max_death=max_death)

    with _stage("compactness"):
        rows = tuple(score_units(districts, seed=config.seed))

    return YearResult(config.year, p_barcode, d_barcode, bn, ws, tp,
                      p_join, d_join, rows, p_field, d_field, schedule)


def run_years(configs: Sequence[AnalysisConfig],
              max_workers: int = 4) -> list[YearResult]:
    """Years in parallel; each year's pipeline is sequential inside."""
    if not configs:
        return []
    with ThreadPoolExecutor(max_workers=min(max_workers, len(configs))) as pool:
        return list(pool.map(run_year, configs))


def cross_year_matrix(results: Sequence[YearResult], which: str = "precinct",
                      dim: int = 1) -> tuple[list[str], np.ndarray]:
    """Pairwise bottleneck distances between the years' chosen barcodes."""
    if which not in ("precinct", "district"):
        raise ParameterError(f"unknown barcode selector {which!r}")
    if not results:
        raise ParameterError("need at least one year")
    diagrams = [(r.precinct_barcode if which == "precinct"
                 else r.district_barcode).diagram(dim) for r in results]
    labels = [r.year for r in results]
    n = len(labels)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = bottleneck(diagrams[i], diagrams[j])
    return labels, out


# === artifact writers ===

def render_barcode_svg(bc: Barcode, dim: int) -> str:
    """Deterministic barcode plot: one line per bar on a threshold axis.

    Infinite bars run to the right margin and end in an arrowhead.
    """
    bars = bc.bars(dim)
    top = bc.thresholds[-1] if bc.thresholds else float(bc.num_levels)
    left, right, row_h, pad = 60.0, 620.0, 16.0, 34.0
    height = pad * 2 + max(len(bars), 1) * row_h

    def x(v: float) -> float:
        return left + (right - left) * (v / top)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="660" height="{height:.0f}" '
        f'viewBox="0 0 660 {height:.0f}">',
        '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="3" '
        'orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#444444"/></marker></defs>',
        f'<text x="{left:.1f}" y="20" font-size="13" fill="#444444" '
        f'font-family="monospace">H{dim} bars: {len(bars)}</text>',
        f'<line x1="{left:.1f}" y1="{height - pad:.1f}" x2="{right:.1f}" '
        f'y2="{height - pad:.1f}" stroke="#444444" stroke-width="1"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        vx = x(top * frac)
        lines.append(f'<line x1="{vx:.1f}" y1="{height - pad:.1f}" x2="{vx:.1f}" '
                     f'y2="{height - pad + 5:.1f}" stroke="#444444" stroke-width="1"/>')
        lines.append(f'<text x="{vx:.1f}" y="{height - pad + 18:.1f}" font-size="11" '
                     f'fill="#444444" text-anchor="middle" font-family="monospace">'
                     f'{top * frac:.2f}</text>')
    for i, bar in enumerate(bars):
        y = pad + (i + 0.5) * row_h
        x1 = x(bc._to_value(bar.birth))
        if bar.essential:
            lines.append(f'<line x1="{x1:.2f}" y1="{y:.1f}" x2="{right:.2f}" '
                         f'y2="{y:.1f}" stroke="#1f6fb4" stroke-width="4" '
                         'marker-end="url(#arrow)"/>')
        else:
            x2 = x(bc._to_value(bar.death))
            lines.append(f'<line x1="{x1:.2f}" y1="{y:.1f}" x2="{x2:.2f}" '
                         f'y2="{y:.1f}" stroke="#1f6fb4" stroke-width="4"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def levelset_snapshot_bytes(field: MarginField, schedule: LevelSchedule,
                            level: int, polarity: str = "democratic") -> bytes:
    """8-bit PGM of one sweep step: active white, waiting black, background gray."""
    if not (1 <= level <= schedule.num_levels):
        raise ParameterError(f"level must be in 1..{schedule.num_levels}, got {level}")
    lv = _vertex_levels(field.values, field.background, schedule, polarity)
    img = np.zeros(field.values.shape, dtype=np.uint8)
    img[(lv >= 1) & (lv <= level)] = 255
    img[field.background] = 128
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    return header + img[::-1].tobytes()


def write_levelset_snapshot(field: MarginField, schedule: LevelSchedule,
                            level: int, path: str | Path,
                            polarity: str = "democratic") -> None:
    Path(path).write_bytes(levelset_snapshot_bytes(field, schedule, level, polarity))


def _result_json(r: YearResult) -> dict:
    def np_free(x):
        return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
                for k, v in x.items()}

    return {
        "year": r.year,
        "precinct_barcode": r.precinct_barcode.to_json(),
        "district_barcode": r.district_barcode.to_json(),
        "bottleneck": np_free(r.bottleneck_by_dim),
        "wasserstein": np_free(r.wasserstein_by_dim),
        "total_persistence": {k: np_free(v)
                              for k, v in r.total_persistence_by_dim.items()},
        "joins": {
            "precinct": {"matched": r.precinct_join.matched,
                         "filled_missing": r.precinct_join.filled_missing,
                         "orphan_vote_rows": list(r.precinct_join.orphan_vote_rows)},
            "district": {"matched": r.district_join.matched,
                         "filled_missing": r.district_join.filled_missing,
                         "orphan_vote_rows": list(r.district_join.orphan_vote_rows)},
        },
        "compactness": [{"district_id": c.district_id,
                         "polsby_popper": c.polsby_popper,
                         "reock": c.reock} for c in r.compactness],
    }


def write_outputs(results: Sequence[YearResult], out_dir: str | Path,
                  dim: int = 1, snapshots: bool = True) -> None:
    """Lay the full artifact set down under out_dir (created if missing)."""
    out = Path(out_dir)
    for sub in ("barcodes", "snapshots", "plots"):
        (out / sub).mkdir(parents=True, exist_ok=True)

    labels: list[str] = []
    diagrams = []
    for r in results:
        for which, bc, fld in (("precinct", r.precinct_barcode, r.precinct_field),
                               ("district", r.district_barcode, r.district_field)):
            name = f"{r.year}_{which}"
            (out / "barcodes" / f"{name}.json").write_text(bc.dumps() + "\n")
            (out / "plots" / f"{name}_h{dim}.svg").write_text(
                render_barcode_svg(bc, dim))
            labels.append(name)
            diagrams.append(bc.diagram(dim))
            if snapshots:
                for lv in range(1, r.schedule.num_levels + 1):
                    write_levelset_snapshot(
                        fld, r.schedule, lv,
                        out / "snapshots" / f"{name}_level_{lv:03d}.pgm")

    n = len(labels)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = bottleneck(diagrams[i], diagrams[j])
    (out / "distances.csv").write_text(matrix_to_csv(labels, matrix))

    comp_rows = []
    for r in results:
        prefix = f"{r.year}/" if len(results) > 1 else ""
        comp_rows.extend(CompactnessRow(prefix + c.district_id, c.polsby_popper,
                                        c.reock) for c in r.compactness)
    (out / "compactness.csv").write_text(scores_to_csv(comp_rows))

    first, last = results[0], results[-1]
    if len(results) >= 2 and len(first.compactness) == len(last.compactness):
        # the paired test is undefined when the plans seat different numbers
        # of districts, so the file is simply absent in that case
        tests = []
        for metric in ("polsby_popper", "reock"):
            a = [getattr(c, metric) for c in first.compactness]
            b = [getattr(c, metric) for c in last.compactness]
            res = paired_t_test(a, b)
            tests.append({"metric": metric, "t": res.t_statistic,
                          "df": res.degrees_of_freedom, "p": res.p_value})
        (out / "ttest.json").write_text(json.dumps(tests, sort_keys=True,
                                                   indent=2) + "\n")

    (out / "report.json").write_text(json.dumps(
        [_result_json(r) for r in results], sort_keys=True, indent=2) + "\n")
