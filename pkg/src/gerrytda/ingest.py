"""Readers for the two input formats and the geometry/votes join.

GeoJSON: FeatureCollection of Polygon / MultiPolygon features, unit id in a
string property (default "id"). Votes CSV: header unit_id,dem_votes,rep_votes.
Units present in the geometry but absent from the CSV are filled with a
token 10/10 split so margins stay defined; vote rows with no geometry are
reported as orphans but do not fail the join.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass

from .errors import IngestError
from .geometry import PolygonSet, Ring, UnitCollection, UnitKind, VotingUnit

log = logging.getLogger(__name__)

# Token count filled in for units missing from the votes file.
MISSING_VOTES_FILL = 10

_CSV_HEADER = ["unit_id", "dem_votes", "rep_votes"]


@dataclass(frozen=True)
class VoteRow:
    unit_id: str
    dem_votes: int
    rep_votes: int


@dataclass(frozen=True)
class JoinReport:
    matched: int
    filled_missing: int
    orphan_vote_rows: tuple[str, ...]

    def __post_init__(self):
        if self.matched < 0 or self.filled_missing < 0:
            raise IngestError("join report counts must be non-negative")


def _rings_of(coords, feature_idx: int) -> tuple[Ring, list[Ring]]:
    try:
        outer = Ring(coords[0])
        holes = [Ring(c) for c in coords[1:]]
    except (IndexError, TypeError) as e:
        raise IngestError(f"feature {feature_idx}: malformed polygon coordinates") from e
    return outer, holes


def parse_geojson(text: str | bytes, id_property: str = "id",
                  kind: UnitKind | None = None) -> UnitCollection:
    """Parse a FeatureCollection into a UnitCollection.

    Vote counts default to zero; dem_votes/rep_votes properties are honored
    when present so a serialized collection round-trips.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise IngestError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise IngestError("expected a FeatureCollection")
    units: list[VotingUnit] = []
    seen: set[str] = set()
    for i, feat in enumerate(doc.get("features", [])):
        props = feat.get("properties") or {}
        uid = props.get(id_property)
        if uid is None:
            raise IngestError(f"feature {i}: missing id")
        uid = str(uid)
        if uid in seen:
            raise IngestError(f"feature {i}: duplicate unit id {uid}")
        seen.add(uid)
        geom = feat.get("geometry") or {}
        gtype = geom.get("type")
        outers: list[Ring] = []
        holes: list[Ring] = []
        if gtype == "Polygon":
            o, h = _rings_of(geom.get("coordinates", []), i)
            outers.append(o)
            holes.extend(h)
        elif gtype == "MultiPolygon":
            for part in geom.get("coordinates", []):
                o, h = _rings_of(part, i)
                outers.append(o)
                holes.extend(h)
        else:
            raise IngestError(f"feature {i}: unsupported geometry type {gtype!r}")
        dem = int(props.get("dem_votes", 0))
        rep = int(props.get("rep_votes", 0))
        ukind = kind
        if ukind is None:
            ukind = UnitKind(props["kind"]) if "kind" in props else UnitKind.PRECINCT
        units.append(VotingUnit(uid, PolygonSet(outers, holes), dem, rep, ukind))
    return UnitCollection(units)


def to_geojson(units: UnitCollection, id_property: str = "id") -> dict:
    """Serialize back to a FeatureCollection (rings explicitly closed)."""

    def ring_coords(ring: Ring) -> list[list[float]]:
        pts = [[float(x), float(y)] for x, y in ring.vertices]
        pts.append(pts[0])
        return pts

    features = []
    for u in units:
        g = u.geometry
        holes_by_owner: dict[int, list] = {}
        for h, owner in zip(g.holes, g.hole_owner):
            holes_by_owner.setdefault(owner, []).append(ring_coords(h))
        parts = [[ring_coords(outer)] + holes_by_owner.get(oi, [])
                 for oi, outer in enumerate(g.outers)]
        if len(parts) == 1:
            geometry = {"type": "Polygon", "coordinates": parts[0]}
        else:
            geometry = {"type": "MultiPolygon", "coordinates": parts}
        features.append({
            "type": "Feature",
            "properties": {
                id_property: u.id,
                "dem_votes": u.dem_votes,
                "rep_votes": u.rep_votes,
                "kind": u.kind.value,
            },
            "geometry": geometry,
        })
    return {"type": "FeatureCollection", "features": features}


def parse_votes_csv(text: str | bytes) -> list[VoteRow]:
    """Parse the votes CSV; row numbers in errors count the header as row 1."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader]
    if not rows:
        raise IngestError("missing header: empty votes file")
    header = [c.strip() for c in rows[0]]
    if header != _CSV_HEADER:
        raise IngestError(f"missing or malformed header: expected {','.join(_CSV_HEADER)}")
    out: list[VoteRow] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise IngestError(f"row {lineno}: expected 3 fields, got {len(row)}")
        uid = row[0].strip()
        if not uid:
            raise IngestError(f"row {lineno}: empty unit_id")
        if uid in seen:
            raise IngestError(f"row {lineno}: duplicate unit_id {uid}")
        seen.add(uid)
        counts = []
        for cell in row[1:]:
            s = cell.strip()
            try:
                v = int(s)
            except ValueError:
                raise IngestError(f"row {lineno}: non-integer count {s!r}") from None
            if v < 0:
                raise IngestError(f"row {lineno}: negative count")
            counts.append(v)
        out.append(VoteRow(uid, counts[0], counts[1]))
    return out


def join_units(geo: UnitCollection, votes: list[VoteRow]) -> tuple[UnitCollection, JoinReport]:
    """Attach vote counts to geometry by unit id.

    Every geometry unit appears in the result: matched units take the CSV
    counts, unmatched ones are filled with 10/10.
    """
    by_id = {v.unit_id: v for v in votes}
    matched = 0
    filled = 0
    joined = []
    for u in geo:
        row = by_id.get(u.id)
        if row is None:
            filled += 1
            joined.append(u.with_votes(MISSING_VOTES_FILL, MISSING_VOTES_FILL))
        else:
            matched += 1
            joined.append(u.with_votes(row.dem_votes, row.rep_votes))
    orphans = tuple(v.unit_id for v in votes if v.unit_id not in geo)
    if orphans:
        log.warning("votes for %d unknown unit(s): %s", len(orphans), ", ".join(orphans[:5]))
    report = JoinReport(matched, filled, orphans)
    assert report.matched + report.filled_missing == len(geo)
    return UnitCollection(joined), report
