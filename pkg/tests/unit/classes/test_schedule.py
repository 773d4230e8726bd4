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

from datetime import datetime

import pytest

from urbanvibe.classes.schedule import (
    MINUTES_PER_DAY,
    MINUTES_PER_WEEK,
    TimeWindow,
    WeeklySchedule,
    day_index,
    day_range_to_intervals,
    intervals_to_day_ranges,
    minute_of_week,
    normalize_intervals,
    overlap_minutes,
    parse_clock_range,
)


def test_day_index():
    assert day_index("mon") == 0
    assert day_index("Sunday") == 6
    assert day_index(" THURS ") == 3
    with pytest.raises(ValueError, match="Unknown day"):
        day_index("someday")


def test_parse_clock_range():
    assert parse_clock_range("09:00-17:30") == (540, 1050)
    assert parse_clock_range("18:00 - 24:00") == (1080, 1440)
    assert parse_clock_range("22:00-02:00") == (1320, 120)


@pytest.mark.parametrize("text", ["9-5", "nine to five", "", "09:00"])
def test_parse_clock_range_unparseable(text):
    with pytest.raises(ValueError, match="Unparseable interval"):
        parse_clock_range(text)


@pytest.mark.parametrize("text", ["24:00-02:00", "10:60-11:00", "10:00-24:30"])
def test_parse_clock_range_invalid(text):
    with pytest.raises(ValueError, match="Invalid clock time"):
        parse_clock_range(text)


def test_day_range_overnight():
    # Tuesday 22:00 to Wednesday 02:00
    assert day_range_to_intervals(1, 1320, 120) == [
        (MINUTES_PER_DAY + 1320, 2 * MINUTES_PER_DAY + 120)
    ]


def test_day_range_wraps_week():
    # Sunday 22:00 to Monday 02:00
    assert day_range_to_intervals(6, 1320, 120) == [
        (6 * MINUTES_PER_DAY + 1320, MINUTES_PER_WEEK),
        (0, 120),
    ]


def test_day_range_equal_ends_is_full_day():
    assert day_range_to_intervals(2, 0, 0) == [
        (2 * MINUTES_PER_DAY, 3 * MINUTES_PER_DAY)
    ]


def test_normalize_intervals_merges_touching():
    merged = normalize_intervals([(50, 60), (0, 10), (10, 20), (15, 30)])
    assert merged == ((0, 30), (50, 60))


def test_normalize_intervals_rejects_bad():
    with pytest.raises(ValueError, match="outside"):
        normalize_intervals([(10, 10)])
    with pytest.raises(ValueError, match="outside"):
        normalize_intervals([(0, MINUTES_PER_WEEK + 1)])


def test_overlap_minutes():
    a = [(0, 100), (200, 300)]
    b = [(50, 250)]
    assert overlap_minutes(a, b) == 100
    assert overlap_minutes(a, []) == 0


def test_minute_of_week():
    # 2015-01-05 was a Monday
    assert minute_of_week(datetime(2015, 1, 5, 0, 0)) == 0
    assert minute_of_week(datetime(2015, 1, 7, 13, 30)) == 2 * 1440 + 810


def test_weekly_schedule_hours(evening):
    schedule = WeeklySchedule([(1080, 1440), (1440 + 540, 1440 + 1020)])
    assert schedule.total_minutes == 360 + 480
    assert schedule.hours == pytest.approx(14.0)
    assert schedule.hours_in(evening) == pytest.approx(6.0)
    assert schedule.hours_in() == schedule.hours
    assert schedule.is_open(1080)
    assert not schedule.is_open(1440)


def test_time_window_from_spec(evening):
    assert evening.intervals == ((1080, 1440),)
    assert evening.minutes == 360
    assert evening.contains(1200)
    assert not evening.contains(1440)
    assert not evening.is_whole_week


def test_time_window_empty_spec_is_whole_week():
    window = TimeWindow.from_spec("week", {})
    assert window.is_whole_week
    assert window.minutes == MINUTES_PER_WEEK
    assert window == TimeWindow.whole_week()
    assert window.to_spec() == {}


def test_time_window_to_spec_splits_days():
    window = TimeWindow.from_spec("late", {"fri": ["22:00-04:00"]})
    spec = window.to_spec()
    assert spec == {"fri": ["22:00-24:00"], "sat": ["00:00-04:00"]}
    assert TimeWindow.from_spec("late", spec) == window


def test_intervals_to_day_ranges_week_wrap():
    intervals = [(0, 60), (MINUTES_PER_WEEK - 60, MINUTES_PER_WEEK)]
    assert intervals_to_day_ranges(intervals) == {
        "mon": ["00:00-01:00"],
        "sun": ["23:00-24:00"],
    }
