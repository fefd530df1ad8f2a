"""Whole-state sized run: 2716 precincts, 14 districts, full artifact tree.

Writes barcodes, snapshots, plots, distance/compactness tables, and
report.json under ./pipeline_out. Takes a few seconds.
"""

import json
import time
from pathlib import Path

from gerrytda.report import AnalysisConfig, run_year, write_outputs
from gerrytda.synth import (
    aggregate_band_votes,
    band_districts,
    grid_mosaic,
    mosaic_votes,
    votes_csv_text,
)

cols, rows, seats = 97, 28, 14
work = Path("pipeline_out")
work.mkdir(exist_ok=True)

votes = mosaic_votes(cols, rows, seed=0)
(work / "precincts.geojson").write_text(json.dumps(grid_mosaic(cols, rows)))
(work / "precincts.csv").write_text(votes_csv_text(votes))
(work / "districts.geojson").write_text(json.dumps(band_districts(cols, rows, seats)))
(work / "districts.csv").write_text(
    votes_csv_text(aggregate_band_votes(cols, rows, seats, votes)))

# relative mode: raw vote shares, no density normalization, finite bars
config = AnalysisConfig(
    year="2024",
    precinct_geo=str(work / "precincts.geojson"),
    precinct_votes=str(work / "precincts.csv"),
    district_geo=str(work / "districts.geojson"),
    district_votes=str(work / "districts.csv"),
    width=1024,
    mode="relative",
)

t0 = time.monotonic()
result = run_year(config)
write_outputs([result], work / "artifacts")
print(f"{result.precinct_join.matched} precincts, "
      f"{result.district_join.matched} districts "
      f"in {time.monotonic() - t0:.1f}s")
print(f"H1 bottleneck(precinct, district) = {result.bottleneck_by_dim[1]:.4f}")
print(f"artifacts under {work / 'artifacts'}")
