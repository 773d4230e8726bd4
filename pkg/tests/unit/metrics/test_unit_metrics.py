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

import pandas as pd
import pytest

from tests.fixtures.unit import make_crime
from urbanvibe.classes.enums import CrimeCategory, CrimeType
from urbanvibe.metrics.units import (
    UNIT_METRIC_COLUMNS,
    UnitMetrics,
    compute_unit_metrics,
    crime_time_profile,
    unit_crime_counts,
    unit_metrics_frame,
)

# 2015-03-02 was a Monday
MONDAY_19 = datetime(2015, 3, 2, 19, 0, tzinfo=timezone.utc)
MONDAY_20 = datetime(2015, 3, 2, 20, 30, tzinfo=timezone.utc)
TUESDAY_12 = datetime(2015, 3, 3, 12, 0, tzinfo=timezone.utc)


@pytest.fixture
def crimes():
    return [
        make_crime("c1", 10, 10, MONDAY_19),
        make_crime("c2", 150, 50, MONDAY_20, CrimeCategory.ASSAULT),
        make_crime("c3", 250, 50, TUESDAY_12),
        make_crime("c4", 5000, 5000, TUESDAY_12),
    ]


def test_unit_crime_counts(units, crimes):
    groups = [u for u in units if u.id.startswith("bg")]
    assert unit_crime_counts(groups, crimes) == {"bg1": (1, 1), "bg2": (0, 1)}


def test_compute_unit_metrics(units, lots, crimes):
    metrics = compute_unit_metrics(units, lots, crimes)
    assert [m.unit_id for m in metrics] == ["b11", "b12", "bg1", "bg2"]
    by_id = {m.unit_id: m for m in metrics}

    bg1 = by_id["bg1"]
    assert (bg1.violent, bg1.non_violent) == (1, 1)
    assert bg1.crimes(CrimeType.ALL) == 2
    assert bg1.vacant_prop == pytest.approx(0.1)
    assert bg1.comres_prop == pytest.approx(0.5)
    assert bg1.mixeduse_prop == pytest.approx(0.5)
    assert bg1.population_density == pytest.approx(1000 / 0.04)
    assert bg1.per_capita_income == 30000.0
    assert bg1.poverty is None

    bg2 = by_id["bg2"]
    assert bg2.vacant_prop == 0.0
    assert bg2.comres_prop is None

    b12 = by_id["b12"]
    assert not b12.included
    assert b12.crimes(CrimeType.VIOLENT) == 1
    assert b12.vacant_prop is None


def test_unit_metrics_frame(units, lots, crimes):
    frame = unit_metrics_frame(compute_unit_metrics(units, lots, crimes))
    assert list(frame.columns) == UNIT_METRIC_COLUMNS
    assert frame.level.tolist() == ["block", "block", "block_group", "block_group"]

    # missing values come back as None, not NaN
    row = frame.astype(object).where(pd.notna(frame), None).iloc[1].to_dict()
    restored = UnitMetrics.from_dict(row)
    assert restored.vacant_prop is None
    assert restored.population == 10


def test_poverty_from_brackets(units, lots, crimes):
    units[1].poverty_brackets = (0, 0, 0, 0.5, 0.5, 0, 0)
    metrics = compute_unit_metrics(units, lots, crimes)
    (bg2,) = [m for m in metrics if m.unit_id == "bg2"]
    assert bg2.poverty == pytest.approx(5 / 12)


def test_crime_time_profile(crimes, evening):
    profile, histogram = crime_time_profile(crimes, [evening])
    by_type = profile.set_index("crime_type")

    assert by_type.loc["violent", "crime_share"] == 1.0
    assert by_type.loc["non_violent", "crimes"] == 3
    assert by_type.loc["non_violent", "crimes_in_window"] == 1
    assert by_type.loc["all", "week_share"] == pytest.approx(360 / 10080)

    assert len(histogram) == 168
    assert histogram.violent.sum() == 1
    assert histogram.non_violent.sum() == 3
    assert histogram.loc[19, "non_violent"] == 1
    assert histogram.loc[20, "violent"] == 1
    assert histogram.loc[36, "non_violent"] == 2
