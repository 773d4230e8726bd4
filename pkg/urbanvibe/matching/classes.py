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
Classes for the matched-pairs studies.
"""

from typing import Optional

from urbanvibe.classes.enums import CrimeType, Study
from urbanvibe.geometry.primitives import GeoPoint

REPORT_COLUMNS = [
    "study",
    "measure",
    "crime_type",
    "window",
    "n",
    "mean_diff",
    "t",
    "p_raw",
    "m",
    "significant",
]

PAIR_COLUMNS = [
    "study",
    "unit_id",
    "measure",
    "crime_type",
    "window",
    "hi_lon",
    "hi_lat",
    "lo_lon",
    "lo_lat",
    "hi_count",
    "lo_count",
    "separation_m",
]


class LocationPair:
    """
    Two locations inside one unit.

    In the high/low study `hi` and `lo` are the highest and lowest crime
    locations; in the hours study they are the longer and shorter open
    business.

    :attr hi_count: Crimes counted around hi, if counted.
    :attr lo_count: Crimes counted around lo, if counted.
    """

    def __init__(
        self,
        unit_id: str,
        hi: GeoPoint,
        lo: GeoPoint,
        crime_type: Optional[CrimeType],
        window: Optional[str],
        separation_m: float,
        study: Study = Study.HIGH_LOW,
        measure: str = "",
        hi_count: Optional[int] = None,
        lo_count: Optional[int] = None,
    ):
        self.unit_id = unit_id
        self.hi = hi
        self.lo = lo
        self.crime_type = CrimeType(crime_type) if crime_type is not None else None
        self.window = window
        self.separation_m = separation_m
        self.study = Study(study)
        self.measure = measure
        self.hi_count = hi_count
        self.lo_count = lo_count

    def to_dict(self) -> dict:
        return {
            "study": self.study.value,
            "unit_id": self.unit_id,
            "measure": self.measure,
            "crime_type": self.crime_type.value if self.crime_type else "",
            "window": self.window or "",
            "hi_lon": self.hi.lon,
            "hi_lat": self.hi.lat,
            "lo_lon": self.lo.lon,
            "lo_lat": self.lo.lat,
            "hi_count": self.hi_count,
            "lo_count": self.lo_count,
            "separation_m": self.separation_m,
        }

    def __repr__(self) -> str:
        return (
            f"LocationPair({self.unit_id!r}, {self.study.value}, "
            f"sep={self.separation_m:.1f} m)"
        )


class MatchedPairReport:
    """
    One cell of a matched-pairs table: a measure compared across pairs for
    one crime type and window.

    :attr mean_diff: Mean of lo - hi (or short - long) differences.
    :attr t: Paired t, None when n < 2.
    :attr m: Bonferroni family size.
    """

    def __init__(
        self,
        study: Study,
        measure: str,
        crime_type: CrimeType,
        window: str,
        n: int,
        mean_diff: Optional[float],
        t: Optional[float] = None,
        p_raw: Optional[float] = None,
        m: int = 0,
        significant: bool = False,
        degenerate: bool = False,
    ):
        self.study = Study(study)
        self.measure = measure
        self.crime_type = CrimeType(crime_type)
        self.window = window
        self.n = n
        self.mean_diff = mean_diff
        self.t = t
        self.p_raw = p_raw
        self.m = m
        self.significant = significant
        self.degenerate = degenerate

    @property
    def tested(self) -> bool:
        return self.p_raw is not None

    def to_dict(self) -> dict:
        return {
            "study": self.study.value,
            "measure": self.measure,
            "crime_type": self.crime_type.value,
            "window": self.window,
            "n": self.n,
            "mean_diff": self.mean_diff,
            "t": self.t,
            "p_raw": self.p_raw,
            "m": self.m,
            "significant": self.significant,
        }

    def __repr__(self) -> str:
        return (
            f"MatchedPairReport({self.measure}, {self.crime_type.value}, "
            f"{self.window}, n={self.n}, t={self.t})"
        )
