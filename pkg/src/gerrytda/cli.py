"""Command-line interface.

Every subcommand accepts --config <path> pointing at a key=value text file;
explicit flags win over config values, which win over defaults. Keys use the
flag names with dashes or underscores interchangeably.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .compactness import paired_t_test, score_units, scores_to_csv
from .compare import bottleneck, matrix_to_csv, wasserstein
from .errors import GerryTdaError, ParameterError
from .geometry import UnitKind
from .ingest import join_units, parse_geojson, parse_votes_csv, to_geojson
from .persistence import barcode, read_barcode_json
from .raster import MarginMode, margin_field, rasterize, write_margin_pgm
from .report import AnalysisConfig, run_year, write_outputs
from .complexes import build_levelset_filtration, uniform_schedule


def _read_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"config line {n}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


class _Options:
    """Flag > config-file > default resolution for one parsed command."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cfg = _read_config(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, default=None, convert=str):
        val = getattr(self.args, key, None)
        if val is not None:
            return val
        if key in self.cfg:
            return convert(self.cfg[key])
        return default

    def require(self, key: str):
        val = self.get(key)
        if val is None:
            raise ParameterError(f"missing required option --{key.replace('_', '-')}")
        return val


def _add_common(p: argparse.ArgumentParser, *names: str) -> None:
    p.add_argument("--config", help="key=value config file")
    if "geo" in names:
        p.add_argument("--geo", help="GeoJSON FeatureCollection path")
    if "votes" in names:
        p.add_argument("--votes", help="votes CSV path (unit_id,dem_votes,rep_votes)")
    if "district" in names:
        p.add_argument("--district-geo", dest="district_geo")
        p.add_argument("--district-votes", dest="district_votes")
    if "raster" in names:
        p.add_argument("--width", type=int, help="raster width in pixels (default 1024)")
        p.add_argument("--mode", choices=["relative", "density"],
                       help="margin mode (default density)")
    if "levels" in names:
        p.add_argument("--levels", type=int, help="sweep level count (default 25)")
        p.add_argument("--max-margin", dest="max_margin", type=float,
                       help="top sweep threshold (default 1.0)")
        p.add_argument("--polarity", choices=["democratic", "republican"])
    if "dim" in names:
        p.add_argument("--dim", type=int, help="homology dimension (default 1)")
    if "out" in names:
        p.add_argument("--out", help="output path")
    if "seed" in names:
        p.add_argument("--seed", type=int, help="random seed (default 0)")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_joined(opts: _Options, geo_key: str, votes_key: str, kind: UnitKind):
    units = parse_geojson(Path(opts.require(geo_key)).read_text(), kind=kind)
    votes = parse_votes_csv(Path(opts.require(votes_key)).read_text())
    return join_units(units, votes)


def _field(opts: _Options):
    units, report = _load_joined(opts, "geo", "votes", UnitKind.PRECINCT)
    width = opts.get("width", 1024, int)
    mode = MarginMode(opts.get("mode", "density"))
    return margin_field(rasterize(units, width), units, mode), units, report


def _cmd_ingest(opts: _Options) -> int:
    units, report = _load_joined(opts, "geo", "votes", UnitKind.PRECINCT)
    doc = to_geojson(units)
    out = opts.get("out")
    if out:
        Path(out).write_text(json.dumps(doc, sort_keys=True))
    summary = {"matched": report.matched, "filled_missing": report.filled_missing,
               "orphan_vote_rows": list(report.orphan_vote_rows),
               "units": len(units)}
    sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_rasterize(opts: _Options) -> int:
    fld, _, _ = _field(opts)
    write_margin_pgm(fld, opts.require("out"))
    return 0


def _cmd_barcode(opts: _Options) -> int:
    fld, _, _ = _field(opts)
    schedule = uniform_schedule(opts.get("levels", 25, int),
                                opts.get("max_margin", 1.0, float))
    bc = barcode(build_levelset_filtration(
        fld, schedule, opts.get("polarity", "democratic")))
    _emit(bc.dumps() + "\n", opts.get("out"))
    return 0


def _cmd_compare(opts: _Options) -> int:
    diagrams = []
    for path in (opts.args.barcode_a, opts.args.barcode_b):
        by_dim, _ = read_barcode_json(Path(path).read_text())
        diagrams.append(by_dim)
    dim = opts.get("dim", 1, int)
    a = diagrams[0].get(dim, [])
    b = diagrams[1].get(dim, [])

    def enc(x: float):
        return "inf" if math.isinf(x) else x

    doc = {"dim": dim, "bottleneck": enc(bottleneck(a, b)),
           "wasserstein_1": enc(wasserstein(a, b, p=1)),
           "wasserstein_2": enc(wasserstein(a, b, p=2))}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", opts.get("out"))
    return 0


def _cmd_compactness(opts: _Options) -> int:
    units = parse_geojson(Path(opts.require("geo")).read_text(),
                          kind=UnitKind.DISTRICT)
    rows = score_units(units, seed=opts.get("seed", 0, int))
    _emit(scores_to_csv(rows), opts.get("out"))
    return 0


def _read_scores_csv(path: str, metric: str) -> list[float]:
    lines = Path(path).read_text().strip().split("\n")
    header = lines[0].strip().split(",")
    if metric not in header:
        raise ParameterError(f"{path}: no column {metric!r}")
    col = header.index(metric)
    return [float(ln.split(",")[col]) for ln in lines[1:]]


def _cmd_ttest(opts: _Options) -> int:
    metric = opts.get("metric", "polsby_popper")
    a = _read_scores_csv(opts.args.scores_a, metric)
    b = _read_scores_csv(opts.args.scores_b, metric)
    res = paired_t_test(a, b)
    doc = {"metric": metric, "t": res.t_statistic,
           "df": res.degrees_of_freedom, "p": res.p_value}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", opts.get("out"))
    return 0


def _cmd_run(opts: _Options) -> int:
    config = AnalysisConfig(
        year=opts.get("year", "year"),
        precinct_geo=opts.require("geo"),
        precinct_votes=opts.require("votes"),
        district_geo=opts.require("district_geo"),
        district_votes=opts.require("district_votes"),
        width=opts.get("width", 1024, int),
        mode=opts.get("mode", "density"),
        levels=opts.get("levels", 25, int),
        max_margin=opts.get("max_margin", 1.0, float),
        polarity=opts.get("polarity", "democratic"),
        dim=opts.get("dim", 1, int),
        seed=opts.get("seed", 0, int),
    )
    result = run_year(config)
    write_outputs([result], opts.require("out"), dim=config.dim,
                  snapshots=not opts.args.no_snapshots)
    headline = result.bottleneck_by_dim[config.dim]
    sys.stdout.write(
        f"{config.year}: H{config.dim} precinct/district bottleneck = "
        f"{'inf' if math.isinf(headline) else format(headline, '.6g')}\n")
    return 0


def _cmd_matrix(opts: _Options) -> int:
    dim = opts.get("dim", 1, int)
    labels, diagrams = [], []
    for path in opts.args.barcodes:
        by_dim, _ = read_barcode_json(Path(path).read_text())
        labels.append(Path(path).stem)
        diagrams.append(by_dim.get(dim, []))
    n = len(labels)
    import numpy as np

    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = bottleneck(diagrams[i], diagrams[j])
    _emit(matrix_to_csv(labels, matrix), opts.get("out"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gerrytda",
        description="Persistent-homology gerrymandering analysis of election maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="join geometry with votes, emit GeoJSON")
    _add_common(p, "geo", "votes", "out")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("rasterize", help="margin field to 16-bit PGM + sidecar")
    _add_common(p, "geo", "votes", "raster", "out")
    p.set_defaults(handler=_cmd_rasterize)

    p = sub.add_parser("barcode", help="level-set persistence barcode JSON")
    _add_common(p, "geo", "votes", "raster", "levels", "out")
    p.set_defaults(handler=_cmd_barcode)

    p = sub.add_parser("compare", help="distances between two barcode files")
    p.add_argument("barcode_a")
    p.add_argument("barcode_b")
    _add_common(p, "dim", "out")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("compactness", help="Polsby-Popper and Reock scores CSV")
    _add_common(p, "geo", "out", "seed")
    p.set_defaults(handler=_cmd_compactness)

    p = sub.add_parser("ttest", help="paired t-test between two score files")
    p.add_argument("scores_a")
    p.add_argument("scores_b")
    p.add_argument("--metric", choices=["polsby_popper", "reock"])
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_ttest)

    p = sub.add_parser("run", help="full one-year pipeline into an output directory")
    _add_common(p, "geo", "votes", "district", "raster", "levels", "dim",
                "out", "seed")
    p.add_argument("--year", help="label for this year's outputs")
    p.add_argument("--no-snapshots", action="store_true",
                   help="skip per-level PGM snapshots")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("matrix", help="pairwise bottleneck matrix of barcode files")
    p.add_argument("barcodes", nargs="+")
    _add_common(p, "dim", "out")
    p.set_defaults(handler=_cmd_matrix)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(_Options(args))
    except GerryTdaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
