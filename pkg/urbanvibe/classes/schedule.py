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
Weekly schedules and time windows.

Both are sets of half-open minute intervals over a week that starts on
Monday 00:00 local time.
"""

import re
from datetime import datetime
from typing import Dict, Iterable, List, Tuple

MINUTES_PER_DAY = 1440
MINUTES_PER_WEEK = 7 * MINUTES_PER_DAY

DAY_KEYS = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"]
DAY_ALIASES = {
    "monday": "mon",
    "tuesday": "tue",
    "tues": "tue",
    "wednesday": "wed",
    "thursday": "thu",
    "thur": "thu",
    "thurs": "thu",
    "friday": "fri",
    "saturday": "sat",
    "sunday": "sun",
}

INTERVAL_RE = re.compile(r"^\s*(\d{1,2}):(\d{2})\s*-\s*(\d{1,2}):(\d{2})\s*$")

Interval = Tuple[int, int]


def day_index(day: str) -> int:
    """
    Index of a day name, Monday = 0.

    :raises ValueError: If the name is not a day.
    """
    key = str(day).strip().casefold()
    key = DAY_ALIASES.get(key, key)
    if key not in DAY_KEYS:
        raise ValueError(f"Unknown day: {day!r}")
    return DAY_KEYS.index(key)


def parse_clock_range(text: str) -> Tuple[int, int]:
    """
    Parse "HH:MM-HH:MM" into minutes after midnight. 24:00 is allowed as an end.

    :return: Start and end minute. End may be smaller than start (overnight).

    :raises ValueError: If the text is not a valid range.
    """
    match = INTERVAL_RE.match(text)
    if not match:
        raise ValueError(f"Unparseable interval: {text!r}")

    h1, m1, h2, m2 = (int(g) for g in match.groups())
    if h1 > 23 or m1 > 59 or m2 > 59 or h2 > 24 or (h2 == 24 and m2 != 0):
        raise ValueError(f"Invalid clock time in: {text!r}")

    return h1 * 60 + m1, h2 * 60 + m2


def day_range_to_intervals(day: int, start: int, end: int) -> List[Interval]:
    """
    Convert a clock range on one day into week intervals.

    Overnight ranges (end <= start) run into the next day, and a range
    that passes Sunday midnight is split at the week boundary. A range
    whose end equals its start covers 24 hours.
    """
    begin = day * MINUTES_PER_DAY + start
    finish = day * MINUTES_PER_DAY + end
    if end <= start:
        finish += MINUTES_PER_DAY

    if finish <= MINUTES_PER_WEEK:
        return [(begin, finish)]

    return [(begin, MINUTES_PER_WEEK), (0, finish - MINUTES_PER_WEEK)]


def normalize_intervals(intervals: Iterable[Interval]) -> Tuple[Interval, ...]:
    """
    Sort intervals and merge those that overlap or touch.

    :raises ValueError: If an interval is empty or outside the week.
    """
    cleaned = []
    for start, end in intervals:
        start, end = int(start), int(end)
        if not 0 <= start < end <= MINUTES_PER_WEEK:
            raise ValueError(
                f"Interval ({start}, {end}) outside [0, {MINUTES_PER_WEEK})"
            )
        cleaned.append((start, end))

    merged: List[List[int]] = []
    for start, end in sorted(cleaned):
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])

    return tuple((start, end) for start, end in merged)


def overlap_minutes(a: Iterable[Interval], b: Iterable[Interval]) -> int:
    """
    Total minutes shared by two normalized interval sets.
    """
    a, b = list(a), list(b)
    i = j = total = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            total += hi - lo
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return total


def minute_of_week(when: datetime) -> int:
    """
    Minute of the week for a (local) timestamp, Monday 00:00 = 0.
    """
    return when.weekday() * MINUTES_PER_DAY + when.hour * 60 + when.minute


class WeeklySchedule:
    """
    The open intervals of a business over one week.

    :attr open_intervals: Disjoint, sorted half-open minute intervals.
    """

    __slots__ = ("open_intervals",)

    def __init__(self, open_intervals: Iterable[Interval] = ()):
        self.open_intervals = normalize_intervals(open_intervals)

    @property
    def total_minutes(self) -> int:
        return sum(end - start for start, end in self.open_intervals)

    @property
    def hours(self) -> float:
        return self.total_minutes / 60

    def hours_in(self, window: "TimeWindow" = None) -> float:
        """
        Open hours inside a window. No window means the whole week.
        """
        if window is None:
            return self.hours
        return overlap_minutes(self.open_intervals, window.intervals) / 60

    def is_open(self, minute: int) -> bool:
        return any(start <= minute < end for start, end in self.open_intervals)

    def __eq__(self, other):
        if not isinstance(other, WeeklySchedule):
            return NotImplemented
        return self.open_intervals == other.open_intervals

    def __hash__(self):
        return hash(self.open_intervals)

    def __repr__(self) -> str:
        return f"WeeklySchedule({list(self.open_intervals)})"

    def __getstate__(self):
        return self.open_intervals

    def __setstate__(self, state):
        self.open_intervals = state


class TimeWindow:
    """
    A named weekly time band, such as weekday evenings.

    :attr name: Name of the window.
    :attr intervals: Disjoint, sorted half-open minute intervals.
    """

    def __init__(self, name: str, intervals: Iterable[Interval]):
        self.name = name
        self.intervals = normalize_intervals(intervals)

    @classmethod
    def whole_week(cls, name: str = "week") -> "TimeWindow":
        return cls(name, [(0, MINUTES_PER_WEEK)])

    @classmethod
    def from_spec(cls, name: str, spec: Dict[str, List[str]]) -> "TimeWindow":
        """
        Build a window from per-day ranges, e.g. {"mon": ["18:00-24:00"]}.

        An empty spec means the whole week.

        :raises ValueError: If a day or range is invalid.
        """
        if not spec:
            return cls.whole_week(name)

        intervals = []
        for day, ranges in spec.items():
            index = day_index(day)
            for text in ranges:
                start, end = parse_clock_range(text)
                intervals.extend(day_range_to_intervals(index, start, end))

        return cls(name, intervals)

    def to_spec(self) -> Dict[str, List[str]]:
        """
        Per-day ranges that rebuild this window with `from_spec`.
        """
        if self.is_whole_week:
            return {}
        return intervals_to_day_ranges(self.intervals)

    @property
    def minutes(self) -> int:
        return sum(end - start for start, end in self.intervals)

    @property
    def is_whole_week(self) -> bool:
        return self.intervals == ((0, MINUTES_PER_WEEK),)

    def contains(self, minute: int) -> bool:
        return any(start <= minute < end for start, end in self.intervals)

    def __eq__(self, other):
        if not isinstance(other, TimeWindow):
            return NotImplemented
        return self.name == other.name and self.intervals == other.intervals

    def __hash__(self):
        return hash((self.name, self.intervals))

    def __repr__(self) -> str:
        return f"TimeWindow({self.name!r}, {list(self.intervals)})"


def _clock(minute: int) -> str:
    return f"{minute // 60:02d}:{minute % 60:02d}"


def intervals_to_day_ranges(intervals: Iterable[Interval]) -> Dict[str, List[str]]:
    """
    Cut week intervals at day boundaries into per-day "HH:MM-HH:MM" ranges.

    Day-end is written as 24:00, so every range is a same-day range.
    """
    ranges: Dict[str, List[str]] = {}
    for start, end in intervals:
        cursor = start
        while cursor < end:
            day = cursor // MINUTES_PER_DAY
            day_end = min(end, (day + 1) * MINUTES_PER_DAY)
            offset = day * MINUTES_PER_DAY
            ranges.setdefault(DAY_KEYS[day], []).append(
                f"{_clock(cursor - offset)}-{_clock(day_end - offset)}"
            )
            cursor = day_end
    return ranges
