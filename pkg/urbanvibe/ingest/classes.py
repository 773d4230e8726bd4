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
Domain classes produced by ingest.
"""

import gzip
import pickle
from datetime import date, datetime
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from urbanvibe.classes.enums import (
    BusinessType,
    CrimeCategory,
    CrimeType,
    Source,
    UnitLevel,
    Zoning,
)
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.classes.schedule import WeeklySchedule, minute_of_week
from urbanvibe.geometry.primitives import GeoPoint, GeoPolygon, contains_many

N_BRACKETS = 7


class GeoUnit:
    """
    A census block or block group.

    A MultiPolygon unit keeps all its parts under one id.
    """

    def __init__(
        self,
        id: str,
        level: UnitLevel,
        polygons: Sequence[GeoPolygon],
        area_m2: float,
        population: Optional[int] = None,
        per_capita_income: Optional[float] = None,
        poverty_brackets: Optional[Sequence[float]] = None,
        included: bool = True,
        bracket_tolerance: float = 1e-6,
        parent_id: Optional[str] = None,
    ):
        """
        :param id: Census identifier.
        :param level: Block or block group.
        :param polygons: One or more polygons.
        :param area_m2: Area in square meters, positive.
        :param population: Resident count, None if unknown.
        :param per_capita_income: Dollars, block groups only.
        :param poverty_brackets: The 7 income-to-poverty-line proportions.
        :param included: Whether the unit passes the population filter.
        :param parent_id: Containing block group, blocks only.

        :raises DataValidationError: If an invariant is violated.
        """
        self.id = str(id)
        self.level = UnitLevel(level)
        self.polygons = list(polygons)
        self.area_m2 = float(area_m2)
        self.population = population
        self.per_capita_income = per_capita_income
        self.poverty_brackets = (
            tuple(float(b) for b in poverty_brackets)
            if poverty_brackets is not None
            else None
        )
        self.included = included
        self.parent_id = parent_id

        if not self.polygons:
            raise DataValidationError(f"Unit {self.id} has no polygon")
        if not self.area_m2 > 0:
            raise DataValidationError(f"Unit {self.id} has non-positive area")
        if population is not None and population < 0:
            raise DataValidationError(f"Unit {self.id} has negative population")
        if self.poverty_brackets is not None:
            check_brackets(self.poverty_brackets, bracket_tolerance, label=self.id)

    @property
    def polygon(self) -> GeoPolygon:
        return self.polygons[0]

    def contains_many(self, lons, lats) -> np.ndarray:
        inside = np.zeros(len(lons), dtype=bool)
        for polygon in self.polygons:
            inside |= contains_many(polygon, lons, lats)
        return inside

    def contains(self, p: GeoPoint) -> bool:
        return bool(self.contains_many([p.lon], [p.lat])[0])

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        b = np.array([p.bounds for p in self.polygons])
        return b[:, 0].min(), b[:, 1].min(), b[:, 2].max(), b[:, 3].max()

    def __repr__(self) -> str:
        return f"GeoUnit({self.id!r}, {self.level.value}, pop={self.population})"


def check_brackets(brackets: Sequence[float], tolerance: float, label: str = ""):
    """
    :raises DataValidationError: Unless there are 7 proportions summing to 1.
    """
    if len(brackets) != N_BRACKETS:
        raise DataValidationError(f"{label}: expected 7 poverty brackets")
    total = float(np.sum(brackets))
    if abs(total - 1) > tolerance or any(b < 0 for b in brackets):
        raise DataValidationError(
            f"{label}: poverty brackets sum to {total}, not 1 ± {tolerance}"
        )


class LandLot:
    """
    A land lot, located by its centroid.
    """

    __slots__ = ("id", "location", "area_m2", "zoning")

    def __init__(self, id: str, location: GeoPoint, area_m2: float, zoning: Zoning):
        if not area_m2 > 0:
            raise DataValidationError(f"Lot {id} has non-positive area")
        self.id = str(id)
        self.location = location
        self.area_m2 = float(area_m2)
        self.zoning = Zoning(zoning)

    def __getstate__(self):
        return (self.id, self.location, self.area_m2, self.zoning)

    def __setstate__(self, state):
        self.id, self.location, self.area_m2, self.zoning = state


class CrimeEvent:
    """
    A timestamped, located, categorised crime.

    :attr when: Timezone-aware local timestamp.
    """

    __slots__ = ("id", "when", "where", "category")

    def __init__(
        self, id: str, when: datetime, where: GeoPoint, category: CrimeCategory
    ):
        self.id = str(id)
        self.when = when
        self.where = where
        self.category = CrimeCategory(category)

    @property
    def super(self) -> CrimeType:
        return self.category.super

    @property
    def minute_of_week(self) -> int:
        return minute_of_week(self.when)

    def __getstate__(self):
        return (self.id, self.when, self.where, self.category)

    def __setstate__(self, state):
        self.id, self.when, self.where, self.category = state


class PropertyRecord:
    """
    A property and the date it was last sold.
    """

    __slots__ = ("id", "where", "residential", "last_sale_date")

    def __init__(
        self, id: str, where: GeoPoint, residential: bool, last_sale_date: date
    ):
        self.id = str(id)
        self.where = where
        self.residential = bool(residential)
        self.last_sale_date = last_sale_date

    def __getstate__(self):
        return (self.id, self.where, self.residential, self.last_sale_date)

    def __setstate__(self, state):
        self.id, self.where, self.residential, self.last_sale_date = state


HoursText = Dict[str, Union[str, List[str]]]


class RawListing(BaseModel):
    """
    One business listing as read from a source.
    """

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    source: Source
    source_id: str
    name: str
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)
    raw_categories: List[str] = Field(default_factory=list, alias="categories")
    hours_text: Optional[HoursText] = Field(default=None, alias="hours")

    @property
    def where(self) -> GeoPoint:
        return GeoPoint(self.lon, self.lat)

    @property
    def key(self) -> Tuple[str, str]:
        return (self.source.value, self.source_id)


class Business:
    """
    A deduplicated business.

    :attr provenance: The (source, source_id) pairs merged into it.
    """

    def __init__(
        self,
        id: str,
        where: GeoPoint,
        canonical_name: str,
        types: FrozenSet[BusinessType],
        schedule: Optional[WeeklySchedule],
        provenance: FrozenSet[Tuple[str, str]],
    ):
        if not types:
            raise DataValidationError(f"Business {id} has no business type")
        self.id = id
        self.where = where
        self.canonical_name = canonical_name
        self.types = frozenset(BusinessType(t) for t in types)
        self.schedule = schedule
        self.provenance = frozenset(provenance)

    @property
    def has_hours(self) -> bool:
        return self.schedule is not None

    def signature(self) -> tuple:
        """
        Everything but the id and provenance, for comparing dedup outputs.
        """
        return (
            round(self.where.lon, 9),
            round(self.where.lat, 9),
            self.canonical_name,
            tuple(sorted(t.value for t in self.types)),
            self.schedule.open_intervals if self.schedule is not None else None,
        )

    def __repr__(self) -> str:
        types = ",".join(sorted(t.value for t in self.types))
        return f"Business({self.id!r}, {self.canonical_name!r}, [{types}])"


class DatasetBundle:
    """
    The validated output of ingest.
    """

    def __init__(
        self,
        units: List[GeoUnit],
        lots: List[LandLot],
        crimes: List[CrimeEvent],
        properties: List[PropertyRecord],
        businesses: List[Business],
        listing_counts: Dict[str, Dict[str, int]],
        ingest_date: date,
        timezone: str,
        report: dict = None,
    ):
        """
        :param listing_counts: Per source, {"total": n, "with_hours": n}.
        :param ingest_date: Reference date for ownership tenure.
        :param timezone: IANA zone of every timestamp.
        :param report: The ingest report (counts, skips, dedup log).
        """
        self.units = units
        self.lots = lots
        self.crimes = crimes
        self.properties = properties
        self.businesses = businesses
        self.listing_counts = listing_counts
        self.ingest_date = ingest_date
        self.timezone = timezone
        self.report = report or {}

    def units_at(self, level: UnitLevel) -> List[GeoUnit]:
        level = UnitLevel(level)
        return [u for u in self.units if u.level == level]

    def save(self, path: str):
        # mtime=0 keeps reruns byte-identical
        with open(path, "wb") as raw, gzip.GzipFile(
            fileobj=raw, mode="wb", mtime=0
        ) as f:
            pickle.dump(self, f, protocol=pickle.HIGHEST_PROTOCOL)

    @classmethod
    def load(cls, path: str) -> "DatasetBundle":
        with gzip.open(path, "rb") as f:
            return pickle.load(f)
