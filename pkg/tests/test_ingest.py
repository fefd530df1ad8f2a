"""GeoJSON / votes CSV parsing and join behavior."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerrytda.errors import IngestError
from gerrytda.geometry import UnitKind, polygon_area
from gerrytda.ingest import (
    JoinReport,
    VoteRow,
    join_units,
    parse_geojson,
    parse_votes_csv,
    to_geojson,
)


def square_feature(uid, x0, y0, size=1.0, props=None):
    ring = [[x0, y0], [x0 + size, y0], [x0 + size, y0 + size], [x0, y0 + size], [x0, y0]]
    p = {"id": uid}
    if props:
        p.update(props)
    return {"type": "Feature", "properties": p,
            "geometry": {"type": "Polygon", "coordinates": [ring]}}


def collection(features):
    return json.dumps({"type": "FeatureCollection", "features": features})


# === parse_geojson ===

def test_parse_single_square():
    col = parse_geojson(collection([square_feature("P01", 0, 0)]))
    assert len(col) == 1
    u = col.by_id("P01")
    assert u.dem_votes == 0 and u.rep_votes == 0
    assert polygon_area(u.geometry) == 1.0


def test_parse_multipolygon_with_hole():
    outer = [[0, 0], [4, 0], [4, 4], [0, 4], [0, 0]]
    hole = [[1, 1], [2, 1], [2, 2], [1, 2], [1, 1]]
    island = [[10, 10], [11, 10], [11, 11], [10, 11], [10, 10]]
    feat = {"type": "Feature", "properties": {"id": "M"},
            "geometry": {"type": "MultiPolygon",
                         "coordinates": [[outer, hole], [island]]}}
    col = parse_geojson(collection([feat]))
    assert polygon_area(col.by_id("M").geometry) == pytest.approx(16.0 - 1.0 + 1.0)


def test_parse_large_collection():
    feats = [square_feature(f"P{i:04d}", i % 97, i // 97) for i in range(2716)]
    col = parse_geojson(collection(feats))
    assert len(col) == 2716


def test_parse_missing_id():
    feat = square_feature("X", 0, 0)
    del feat["properties"]["id"]
    with pytest.raises(IngestError, match="feature 0: missing id"):
        parse_geojson(collection([feat]))


def test_parse_unsupported_geometry():
    feat = {"type": "Feature", "properties": {"id": "L"},
            "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]}}
    with pytest.raises(IngestError, match="unsupported geometry type"):
        parse_geojson(collection([feat]))


def test_parse_duplicate_id():
    feats = [square_feature("A", 0, 0), square_feature("A", 2, 0)]
    with pytest.raises(IngestError, match="duplicate unit id"):
        parse_geojson(collection(feats))


def test_parse_custom_id_property():
    feat = square_feature("ignored", 0, 0, props={"name": "W1"})
    col = parse_geojson(collection([feat]), id_property="name")
    assert col.by_id("W1").id == "W1"


def test_parse_not_a_collection():
    with pytest.raises(IngestError, match="FeatureCollection"):
        parse_geojson(json.dumps({"type": "Feature"}))


def test_parse_kind_override():
    col = parse_geojson(collection([square_feature("D1", 0, 0)]), kind=UnitKind.DISTRICT)
    assert col.by_id("D1").kind is UnitKind.DISTRICT


# === round trip ===

def test_geojson_round_trip():
    outer = [[0, 0], [4, 0], [4, 4], [0, 4], [0, 0]]
    hole = [[1, 1], [2, 1], [2, 2], [1, 2], [1, 1]]
    feats = [
        square_feature("A", 0, 0, props={"dem_votes": 120, "rep_votes": 80}),
        {"type": "Feature", "properties": {"id": "B", "dem_votes": 5, "rep_votes": 9},
         "geometry": {"type": "Polygon", "coordinates": [outer, hole]}},
    ]
    col = parse_geojson(collection(feats))
    back = parse_geojson(json.dumps(to_geojson(col)))
    assert [u.id for u in back] == [u.id for u in col]
    for a, b in zip(col, back):
        assert (a.dem_votes, a.rep_votes, a.kind) == (b.dem_votes, b.rep_votes, b.kind)
        assert polygon_area(b.geometry) == pytest.approx(polygon_area(a.geometry), rel=1e-9)


# === parse_votes_csv ===

def test_votes_basic():
    rows = parse_votes_csv("unit_id,dem_votes,rep_votes\nP01,150,50\n")
    assert rows == [VoteRow("P01", 150, 50)]


def test_votes_whitespace_tolerated():
    rows = parse_votes_csv("unit_id, dem_votes, rep_votes\n P01 , 1 , 2 \n")
    assert rows == [VoteRow("P01", 1, 2)]


def test_votes_negative_count():
    with pytest.raises(IngestError, match="row 2: negative count"):
        parse_votes_csv("unit_id,dem_votes,rep_votes\nP02,-5,10\n")


def test_votes_non_integer():
    with pytest.raises(IngestError, match="row 3: non-integer count"):
        parse_votes_csv("unit_id,dem_votes,rep_votes\nP01,1,2\nP02,a,3\n")


def test_votes_duplicate_id():
    with pytest.raises(IngestError, match="row 3: duplicate unit_id"):
        parse_votes_csv("unit_id,dem_votes,rep_votes\nP01,1,2\nP01,3,4\n")


def test_votes_empty_file():
    with pytest.raises(IngestError, match="missing header"):
        parse_votes_csv("")


def test_votes_wrong_header():
    with pytest.raises(IngestError, match="header"):
        parse_votes_csv("id,dem,rep\nP01,1,2\n")


# === join_units ===

def geo_of(ids):
    return parse_geojson(collection([square_feature(u, i, 0) for i, u in enumerate(ids)]))


def test_join_fills_missing_with_token_votes():
    geo = geo_of(["A", "B", "C"])
    votes = [VoteRow("A", 100, 50), VoteRow("C", 30, 70)]
    joined, rep = join_units(geo, votes)
    assert rep == JoinReport(matched=2, filled_missing=1, orphan_vote_rows=())
    assert joined.by_id("B").dem_votes == 10 and joined.by_id("B").rep_votes == 10


def test_join_reports_orphans():
    geo = geo_of(["A"])
    votes = [VoteRow("A", 1, 2), VoteRow("Z", 5, 5)]
    joined, rep = join_units(geo, votes)
    assert rep.orphan_vote_rows == ("Z",)
    assert rep.matched == 1 and rep.filled_missing == 0
    assert len(joined) == 1


def test_join_idempotent():
    geo = geo_of(["A", "B"])
    votes = [VoteRow("A", 3, 4)]
    first, rep1 = join_units(geo, votes)
    second, rep2 = join_units(first, votes)
    assert rep1 == rep2
    assert [(u.dem_votes, u.rep_votes) for u in first] == \
           [(u.dem_votes, u.rep_votes) for u in second]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_join_report_arithmetic(data):
    ids = [f"U{i}" for i in range(8)]
    geo = geo_of(ids)
    vote_ids = data.draw(st.lists(
        st.sampled_from(ids + ["X1", "X2", "X3"]), unique=True, max_size=11))
    votes = [VoteRow(u, 1, 2) for u in vote_ids]
    joined, rep = join_units(geo, votes)
    assert rep.matched + rep.filled_missing == len(geo) == len(joined)
    assert rep.matched == len([u for u in vote_ids if u in ids])
    assert set(rep.orphan_vote_rows) == {u for u in vote_ids if u not in ids}
