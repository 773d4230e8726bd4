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

from datetime import datetime, timezone

import numpy as np
import pytest

from tests.fixtures.unit import make_crime, square_unit
from urbanvibe.classes.enums import CrimeCategory, CrimeType
from urbanvibe.geometry.primitives import GeoPoint, distance_m, haversine_m, offset_m
from urbanvibe.matching.extremes import (
    candidate_grid,
    crime_index,
    locate_extreme_crime,
    qualifying_crimes,
)

MONDAY_19 = datetime(2015, 3, 2, 19, 0, tzinfo=timezone.utc)
TUESDAY_12 = datetime(2015, 3, 3, 12, 0, tzinfo=timezone.utc)


@pytest.fixture
def unit():
    return square_unit("g1", 0, 0, 200)


@pytest.fixture
def crimes():
    thefts = [make_crime(f"t{i}", 20, 20, MONDAY_19) for i in range(5)]
    assaults = [
        make_crime(f"a{i}", 150, 150, TUESDAY_12, CrimeCategory.ASSAULT)
        for i in range(3)
    ]
    return thefts + assaults


def test_candidate_grid(unit):
    grid = candidate_grid(unit, 10)
    # 21 x 21 nodes, boundary included, give or take the far edges
    assert 400 <= len(grid.lons) <= 441
    assert grid.lons[0] == pytest.approx(unit.bounds[0])
    assert grid.lats[0] == pytest.approx(unit.bounds[1])

    assert 16 <= len(candidate_grid(unit, 50).lons) <= 25


def test_qualifying_crimes(crimes, evening):
    assert len(qualifying_crimes(crimes, CrimeType.NON_VIOLENT)) == 5
    assert len(qualifying_crimes(crimes, CrimeType.VIOLENT)) == 3
    assert len(qualifying_crimes(crimes, CrimeType.ALL)) == 8
    assert len(qualifying_crimes(crimes, CrimeType.ALL, evening)) == 5
    assert len(crime_index(crimes, CrimeType.VIOLENT, evening)) == 0


def test_locate_extreme_crime(unit, crimes, origin):
    extremes = locate_extreme_crime(
        unit, crimes, CrimeType.NON_VIOLENT, min_separation=50
    )
    # first maximum in scan order is the south-west corner, first minimum
    # the first node of the bottom row more than 50 m from the thefts
    assert distance_m(extremes.hi, origin) < 0.01
    assert distance_m(extremes.lo, offset_m(origin, 70, 0)) < 0.01
    assert extremes.hi_count == 5
    assert extremes.lo_count == 0
    assert extremes.separation_m == pytest.approx(70, abs=0.01)


def test_locate_extreme_crime_too_close(unit, crimes):
    assert (
        locate_extreme_crime(unit, crimes, CrimeType.NON_VIOLENT, min_separation=100)
        is None
    )


def test_locate_extreme_crime_no_crimes(unit, crimes, evening):
    assert locate_extreme_crime(unit, [], CrimeType.ALL) is None
    assert locate_extreme_crime(unit, crimes, CrimeType.VIOLENT, evening) is None


def test_locate_extreme_crime_prebuilt_index(unit, crimes):
    index = crime_index(crimes, CrimeType.VIOLENT)
    extremes = locate_extreme_crime(unit, (), CrimeType.VIOLENT, index=index)
    assert extremes.hi_count == 3
    assert extremes == locate_extreme_crime(unit, crimes, CrimeType.VIOLENT)


@pytest.mark.parametrize("seed", range(6))
def test_locate_extreme_crime_matches_brute_force(unit, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    # a cluster plus uniform background, some of it outside the unit
    east = np.concatenate(
        [rng.normal(rng.uniform(0, 200), 15, n), rng.uniform(-50, 250, n)]
    )
    north = np.concatenate(
        [rng.normal(rng.uniform(0, 200), 15, n), rng.uniform(-50, 250, n)]
    )
    crimes = [
        make_crime(f"c{i}", e, n_, MONDAY_19)
        for i, (e, n_) in enumerate(zip(east, north))
    ]
    radius, min_separation = 40.0, float(rng.uniform(20, 150))

    grid = candidate_grid(unit, 10)
    lats = np.array([c.where.lat for c in crimes])
    lons = np.array([c.where.lon for c in crimes])
    counts = np.array(
        [
            np.count_nonzero(haversine_m(lat, lon, lats, lons) <= radius)
            for lat, lon in zip(grid.lats, grid.lons)
        ]
    )
    if counts.max() == 0:
        found = locate_extreme_crime(unit, crimes, CrimeType.NON_VIOLENT, radius=radius)
        assert found is None
        return

    hi_i = next(i for i, c in enumerate(counts) if c == counts.max())
    lo_i = next(i for i, c in enumerate(counts) if c == counts.min())
    hi = GeoPoint(grid.lons[hi_i], grid.lats[hi_i])
    lo = GeoPoint(grid.lons[lo_i], grid.lats[lo_i])

    extremes = locate_extreme_crime(
        unit,
        crimes,
        CrimeType.NON_VIOLENT,
        radius=radius,
        min_separation=min_separation,
    )

    if distance_m(hi, lo) < min_separation:
        assert extremes is None
        return
    assert (extremes.hi, extremes.lo) == (hi, lo)
    assert (extremes.hi_count, extremes.lo_count) == (counts[hi_i], counts[lo_i])
    assert extremes.separation_m == pytest.approx(distance_m(hi, lo))
