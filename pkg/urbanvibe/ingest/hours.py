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

"""
Opening hours parsing.

Hours arrive per day, e.g. {"mon": ["09:00-17:00"], "sat": "22:00-02:00",
"sun": "closed"}. Overnight ranges run into the next day and are split at
the week boundary.
"""

from typing import Dict, List, Optional, Union

from urbanvibe.classes.schedule import (
    DAY_KEYS,
    WeeklySchedule,
    day_index,
    day_range_to_intervals,
    intervals_to_day_ranges,
    parse_clock_range,
)
from urbanvibe.logs import ulogger

CLOSED = "closed"


def _tokens(value: Union[str, List[str], None]) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        value = [value]
    tokens = []
    for item in value:
        tokens.extend(t.strip() for t in str(item).split(",") if t.strip())
    return tokens


def parse_hours(
    hours_text: Optional[Dict[str, Union[str, List[str]]]], label: str = None
) -> Optional[WeeklySchedule]:
    """
    Parse per-day opening hours into a WeeklySchedule.

    :param hours_text: Day name to range strings. None or {} means no hours.
    :param label: Record label used in warnings.

    :return: The schedule, or None if hours are absent or unparseable.
    """
    if not hours_text:
        return None

    intervals = []
    try:
        for day, value in hours_text.items():
            index = day_index(day)
            for token in _tokens(value):
                if token.casefold() == CLOSED:
                    continue
                start, end = parse_clock_range(token)
                intervals.extend(day_range_to_intervals(index, start, end))
    except ValueError as e:
        ulogger.warning(f"{label or 'listing'}: hours dropped, {e}")
        return None

    return WeeklySchedule(intervals)


def schedule_to_hours_text(schedule: WeeklySchedule) -> Dict[str, List[str]]:
    """
    Per-day range strings for a schedule. Closed days read "closed".

    parse_hours(schedule_to_hours_text(s)) == s.
    """
    ranges = intervals_to_day_ranges(schedule.open_intervals)
    return {day: ranges.get(day, [CLOSED]) for day in DAY_KEYS}
