"""Raster-free alternative: sweep the precinct adjacency graph directly.

Units won by the chosen party enter strongest-first; edges appear when both
endpoints are present, triangles when all three edges are. The Democratic
island shows up as a persistent loop in the Republican adjacency complex.
"""

import json

from gerrytda.complexes import build_adjacency_filtration, uniform_schedule
from gerrytda.ingest import join_units, parse_geojson, parse_votes_csv
from gerrytda.persistence import barcode
from gerrytda.synth import island_scenario, votes_csv_text

scenario = island_scenario(island_margin=0.8)
geo = parse_geojson(json.dumps(scenario["precinct_geojson"]))
votes = parse_votes_csv(votes_csv_text(scenario["precinct_votes"]))
units, _ = join_units(geo, votes)

schedule = uniform_schedule(10)
for party in ("republican", "democratic"):
    cx = build_adjacency_filtration(units, schedule, kind="queen", party=party)
    bc = barcode(cx)
    h1 = bc.diagram(1)
    print(f"{party}: {len(cx)} cells, H1 bars: {h1 if h1 else 'none'}")
