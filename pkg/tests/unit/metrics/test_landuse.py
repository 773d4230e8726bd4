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

import pytest

from urbanvibe.classes.enums import Zoning
from urbanvibe.geometry.primitives import offset_m
from urbanvibe.ingest.classes import LandLot
from urbanvibe.metrics.landuse import (
    NO_LAND_USE,
    landuse_in_radius,
    landuse_props,
    lot_index,
)


def test_landuse_props(lots):
    # vacant 100, commercial 200, residential 200, mixed 500, park 400
    land = landuse_props(lots)
    assert land.vacant_prop == pytest.approx(100 / 1400)
    assert land.comres_prop == pytest.approx(0.5)
    assert land.mixeduse_prop == pytest.approx(500 / 1400)


def test_landuse_props_no_commercial_or_residential(origin):
    lots = [
        LandLot("a", origin, 300.0, Zoning.VACANT),
        LandLot("b", origin, 100.0, Zoning.INDUSTRIAL),
    ]
    land = landuse_props(lots)
    assert land.vacant_prop == pytest.approx(0.75)
    assert land.comres_prop is None
    assert land.mixeduse_prop == 0.0


def test_landuse_props_no_lots():
    assert landuse_props([]) == NO_LAND_USE


def test_landuse_in_radius(origin, lots):
    # only l1..l4 lie within 100 m of (50, 50)
    center = offset_m(origin, 50, 50)
    land = landuse_in_radius(center, 100, lots)
    assert land.vacant_prop == pytest.approx(0.1)
    assert land.comres_prop == pytest.approx(0.5)
    assert land.mixeduse_prop == pytest.approx(0.5)

    index = lot_index(lots)
    assert landuse_in_radius(center, 100, lots, index) == land


def test_landuse_in_radius_empty(origin, lots):
    far = offset_m(origin, 5000, 5000)
    assert landuse_in_radius(far, 50, lots) == NO_LAND_USE
