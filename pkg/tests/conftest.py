"""Session-scoped synthetic map fixtures shared across test modules."""

import json

import pytest

from gerrytda.synth import island_scenario, votes_csv_text


def write_scenario(root, scenario):
    """Write the island scenario's layers to disk, return a path map."""
    paths = {}
    for name in ("precinct", "packed", "cracked"):
        geo = root / f"{name}.geojson"
        geo.write_text(json.dumps(scenario[f"{name}_geojson"]))
        votes = root / f"{name}_votes.csv"
        votes.write_text(votes_csv_text(scenario[f"{name}_votes"]))
        paths[f"{name}_geo"] = str(geo)
        paths[f"{name}_votes"] = str(votes)
    return paths


@pytest.fixture(scope="session")
def island_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("island")
    scenario = island_scenario(island_margin=0.8)
    paths = write_scenario(root, scenario)
    paths["scenario"] = scenario
    return paths
