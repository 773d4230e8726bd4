# Copyright 2024 Adam McArthur
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

from tests.fixtures.unit import square_ring
from urbanvibe.classes.enums import UnitLevel
from urbanvibe.classes.errors import (
    DataValidationError,
    GeometryError,
    IdMismatchError,
)
from urbanvibe.classes.general import LoadReport
from urbanvibe.ingest.geounits import (
    load_geounits,
    polygons_from_geometry,
    population_filter_summary,
)

ACS_HEADER = "id,per_capita_income,b1,b2,b3,b4,b5,b6,b7"


def unit_feature(origin, unit_id, level, east, north, edge):
    return {
        "type": "Feature",
        "properties": {"id": unit_id, "level": level},
        "geometry": {
            "type": "Polygon",
            "coordinates": [square_ring(origin, east, north, edge)],
        },
    }


@pytest.fixture
def city(tmp_path, origin):
    """
    Two block groups, the first split into two blocks.
    """
    features = [
        unit_feature(origin, "g1", "block_group", 0, 0, 200),
        unit_feature(origin, "g2", "block_group", 200, 0, 200),
        unit_feature(origin, "k1", "block", 0, 0, 100),
        unit_feature(origin, "k2", "block", 100, 100, 100),
    ]
    geojson = tmp_path / "units.geojson"
    geojson.write_text(json.dumps({"type": "FeatureCollection", "features": features}))

    population = tmp_path / "population.csv"
    population.write_text("id,population\ng2,350\nk1,300\nk2,20\n")

    acs = tmp_path / "acs.csv"
    acs.write_text(
        f"{ACS_HEADER}\n"
        "g1,30000,0.1,0.1,0.2,0.2,0.2,0.1,0.1\n"
        "g2,60000,0,0,0,0.5,0.5,0,0\n"
    )
    return {"geojson": str(geojson), "population": str(population), "acs": str(acs)}


def load(city, **kwargs):
    units = load_geounits(city["geojson"], city["population"], city["acs"], **kwargs)
    return {u.id: u for u in units}


def test_load_geounits(city):
    units = load(city)

    assert units["k1"].level == UnitLevel.BLOCK
    assert units["k1"].parent_id == "g1"
    assert units["k2"].parent_id == "g1"
    assert units["g1"].area_m2 == pytest.approx(40000, rel=1e-3)

    # g1 has no population row, so it takes the sum of its blocks
    assert units["g1"].population == 320
    assert units["g2"].per_capita_income == 60000
    assert units["g2"].poverty_brackets == (0, 0, 0, 0.5, 0.5, 0, 0)


def test_population_filter(city):
    units = load(city)
    assert units["k1"].included
    assert not units["k2"].included
    assert not units["g1"].included
    assert not units["g2"].included

    units = load(city, min_block_population=10, min_block_group_population=300)
    assert all(u.included for u in units.values())


def test_population_filter_summary(city):
    rows = population_filter_summary(list(load(city).values()))
    summary = {row["level"]: row for row in rows}
    assert summary["block"]["units"] == 2
    assert summary["block"]["units_included"] == 1
    assert summary["block"]["share_included"] == pytest.approx(300 / 320)
    assert summary["block_group"]["population_included"] == 0


def test_unknown_population_id(city, tmp_path):
    path = tmp_path / "population.csv"
    path.write_text("id,population\ng2,350\nk1,300\nk2,20\nzz9,5\nzz1,5\n")
    with pytest.raises(IdMismatchError, match="zz1, zz9") as e:
        load(city)
    assert e.value.unmatched == ["zz1", "zz9"]


def test_missing_block_population(city, tmp_path):
    path = tmp_path / "population.csv"
    path.write_text("id,population\ng2,350\nk1,300\n")
    with pytest.raises(IdMismatchError, match="no population row") as e:
        load(city)
    assert e.value.unmatched == ["k2"]


def test_unknown_acs_id(city, tmp_path):
    path = tmp_path / "acs.csv"
    path.write_text(f"{ACS_HEADER}\nk1,1,1,0,0,0,0,0,0\n")
    with pytest.raises(IdMismatchError, match="ACS ids"):
        load(city)


def test_bad_brackets(city, tmp_path):
    path = tmp_path / "acs.csv"
    path.write_text(f"{ACS_HEADER}\ng1,30000,0.5,0.5,0.5,0,0,0,0\n")
    with pytest.raises(DataValidationError, match="line 2"):
        load(city)


def test_negative_population(city, tmp_path):
    path = tmp_path / "population.csv"
    path.write_text("id,population\ng2,-1\nk1,300\nk2,20\n")
    with pytest.raises(DataValidationError, match="non-negative integer"):
        load(city)


def test_report_counts(city):
    report = LoadReport("units.geojson")
    load_geounits(city["geojson"], city["population"], city["acs"], report=report)
    assert report.read == 4
    assert report.errors == ["3 units below the population filter"]


def test_polygons_from_geometry(origin):
    ring = square_ring(origin, 0, 0, 10)
    multi = {"type": "MultiPolygon", "coordinates": [[ring], [ring]]}
    assert len(polygons_from_geometry(multi, "unit")) == 2

    with pytest.raises(GeometryError, match="unsupported geometry type 'Point'"):
        polygons_from_geometry({"type": "Point", "coordinates": [0, 0]}, "unit")

    with pytest.raises(GeometryError, match="not closed"):
        polygons_from_geometry({"type": "Polygon", "coordinates": [ring[:-1]]}, "unit")
