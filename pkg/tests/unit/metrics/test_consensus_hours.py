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

from tests.fixtures.unit import make_business
from urbanvibe.classes.enums import BusinessType
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.metrics.hours import (
    business_hours_table,
    consensus_frame,
    consensus_hours,
    consensus_table,
    excess_hours,
)


@pytest.fixture
def businesses():
    return [
        make_business("A:1", 0, 0, hours={"mon": "09:00-17:00"}),
        make_business("A:2", 0, 0, hours={"mon": "09:00-13:00, 18:00-22:00"}),
        make_business("A:3", 0, 0),
        make_business(
            "B:1",
            0,
            0,
            types=(BusinessType.CAFE, BusinessType.NIGHTLIFE),
            hours={"mon": "20:00-02:00"},
        ),
    ]


def test_consensus_hours(businesses, evening):
    assert consensus_hours(businesses, BusinessType.CAFE) == pytest.approx(22 / 3)
    # within Monday evening: 0, 4 and 4 hours
    assert consensus_hours(businesses, BusinessType.CAFE, evening) == pytest.approx(
        8 / 3
    )
    assert consensus_hours(businesses, BusinessType.NIGHTLIFE) == pytest.approx(6.0)
    assert consensus_hours(businesses, BusinessType.GYM) is None


def test_excess_hours(businesses, evening):
    consensus = consensus_hours(businesses, BusinessType.CAFE)
    assert excess_hours(businesses[0], consensus) == pytest.approx(8 - 22 / 3)
    assert excess_hours(businesses[0], 8 / 3, evening) == pytest.approx(-8 / 3)
    assert excess_hours(businesses[2], consensus) is None
    assert excess_hours(businesses[0], None) is None


def test_consensus_table(businesses, evening):
    week = TimeWindow.whole_week()
    table = consensus_table(businesses, [week, evening])
    assert len(table) == 2 * len(BusinessType)
    assert table[(BusinessType.CAFE, "evening")] == pytest.approx(8 / 3)
    assert table[(BusinessType.LIQUOR, "week")] is None

    frame = consensus_frame(table, businesses)
    cafe = frame[(frame.business_type == "Cafe") & (frame.window == "week")]
    assert cafe.n_with_hours.item() == 3


def test_business_hours_table(businesses, evening):
    table = business_hours_table(businesses, [TimeWindow.whole_week(), evening])
    # three businesses with hours, B:1 has two types, two windows each
    assert len(table) == (1 + 1 + 2) * 2
    assert table.business_id.iloc[0] == "A:1"

    row = table[
        (table.business_id == "B:1")
        & (table.business_type == "Nightlife")
        & (table.window == "week")
    ]
    assert row.excess_hours.item() == pytest.approx(0.0)

    # excess hours of a type average to zero
    week = table[(table.business_type == "Cafe") & (table.window == "week")]
    assert week.excess_hours.mean() == pytest.approx(0.0)
