"""Polsby-Popper and Reock for two district plans, plus the paired t-test."""

import json

from gerrytda.compactness import paired_t_test, score_units
from gerrytda.geometry import UnitKind
from gerrytda.ingest import parse_geojson
from gerrytda.synth import island_scenario

scenario = island_scenario(island_margin=0.8)

# the cracked plan is four tidy squares; the packed plan pays for its island
# district with two long flanking districts
scores = {}
for plan in ("packed", "cracked"):
    units = parse_geojson(json.dumps(scenario[f"{plan}_geojson"]),
                          kind=UnitKind.DISTRICT)
    rows = score_units(units)
    scores[plan] = rows
    print(f"{plan}:")
    for row in rows:
        print(f"  {row.district_id:6s} polsby_popper={row.polsby_popper:.4f} "
              f"reock={row.reock:.4f}")

# pair the packed plan's five districts against a five-band strip plan
from gerrytda.synth import band_districts

bands = parse_geojson(json.dumps(band_districts(10, 10, 5)),
                      kind=UnitKind.DISTRICT)
band_rows = score_units(bands)
for metric in ("polsby_popper", "reock"):
    a = [getattr(r, metric) for r in scores["packed"]]
    b = [getattr(r, metric) for r in band_rows]
    res = paired_t_test(a, b)
    print(f"paired t-test on {metric}: t={res.t_statistic:.3f} "
          f"df={res.degrees_of_freedom} p={res.p_value:.4f}")
