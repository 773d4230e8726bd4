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
Per-unit metrics: crime counts, economics, density and land use for every
block and block group.
"""

from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import CrimeType, UnitLevel
from urbanvibe.classes.schedule import MINUTES_PER_WEEK, TimeWindow
from urbanvibe.geometry.assign import UNASSIGNED, assign_points_to_units
from urbanvibe.ingest.classes import CrimeEvent, GeoUnit, LandLot
from urbanvibe.ingest.records import crime_in_window
from urbanvibe.logs import ulogger
from urbanvibe.metrics.economic import poverty_index, population_density
from urbanvibe.metrics.landuse import landuse_props

UNIT_METRIC_COLUMNS = [
    "unit_id",
    "level",
    "included",
    "population",
    "area_m2",
    "population_density",
    "per_capita_income",
    "poverty",
    "vacant_prop",
    "comres_prop",
    "mixeduse_prop",
    "violent",
    "non_violent",
]


class UnitMetrics:
    """
    The measures of one block or block group.

    Proportions are None when undefined, never 0 by default.
    """

    def __init__(
        self,
        unit_id: str,
        level: UnitLevel,
        included: bool,
        population: Optional[int],
        area_m2: float,
        population_density: Optional[float],
        per_capita_income: Optional[float],
        poverty: Optional[float],
        vacant_prop: Optional[float],
        comres_prop: Optional[float],
        mixeduse_prop: Optional[float],
        violent: int,
        non_violent: int,
    ):
        self.unit_id = unit_id
        self.level = UnitLevel(level)
        self.included = included
        self.population = population
        self.area_m2 = area_m2
        self.population_density = population_density
        self.per_capita_income = per_capita_income
        self.poverty = poverty
        self.vacant_prop = vacant_prop
        self.comres_prop = comres_prop
        self.mixeduse_prop = mixeduse_prop
        self.violent = violent
        self.non_violent = non_violent

    def crimes(self, crime_type: CrimeType) -> int:
        if crime_type == CrimeType.VIOLENT:
            return self.violent
        if crime_type == CrimeType.NON_VIOLENT:
            return self.non_violent
        return self.violent + self.non_violent

    def to_dict(self) -> dict:
        row = {c: getattr(self, c) for c in UNIT_METRIC_COLUMNS}
        row["level"] = self.level.value
        return row

    @classmethod
    def from_dict(cls, row: dict) -> "UnitMetrics":
        def opt(value, kind=float):
            return None if value is None or pd.isna(value) else kind(value)

        return cls(
            unit_id=str(row["unit_id"]),
            level=UnitLevel(row["level"]),
            included=bool(row["included"]),
            population=opt(row["population"], int),
            area_m2=float(row["area_m2"]),
            population_density=opt(row["population_density"]),
            per_capita_income=opt(row["per_capita_income"]),
            poverty=opt(row["poverty"]),
            vacant_prop=opt(row["vacant_prop"]),
            comres_prop=opt(row["comres_prop"]),
            mixeduse_prop=opt(row["mixeduse_prop"]),
            violent=int(row["violent"]),
            non_violent=int(row["non_violent"]),
        )


def unit_crime_counts(
    units: Sequence[GeoUnit], crimes: Sequence[CrimeEvent]
) -> Dict[str, Tuple[int, int]]:
    """
    Violent and non-violent crimes inside each unit.

    Units should share one level; a crime in overlapping units counts once,
    for the smallest.

    :return: Unit id to (violent, non_violent).
    """
    assigned = assign_points_to_units([c.where for c in crimes], units)
    counts = Counter(
        (unit_id, crime.super)
        for unit_id, crime in zip(assigned, crimes)
        if unit_id != UNASSIGNED
    )
    return {
        u.id: (counts[(u.id, CrimeType.VIOLENT)], counts[(u.id, CrimeType.NON_VIOLENT)])
        for u in units
    }


def _lots_by_unit(units: Sequence[GeoUnit], lots: Sequence[LandLot]):
    assigned = assign_points_to_units([lot.location for lot in lots], units)
    by_unit: Dict[str, List[LandLot]] = {u.id: [] for u in units}
    for unit_id, lot in zip(assigned, lots):
        if unit_id != UNASSIGNED:
            by_unit[unit_id].append(lot)
    return by_unit


def compute_unit_metrics(
    units: Sequence[GeoUnit],
    lots: Sequence[LandLot],
    crimes: Sequence[CrimeEvent],
    poverty_weights: Sequence[float] = None,
) -> List[UnitMetrics]:
    """
    Compute the metrics of every unit, level by level.

    :param units: Blocks and/or block groups.
    :param lots: Land lots, assigned to units by centroid.
    :param crimes: Crimes, assigned to units by location.
    :param poverty_weights: The 7 bracket weights.

    :return: One UnitMetrics per unit, sorted by level then id.
    """
    metrics = []
    for level in UnitLevel:
        at_level = [u for u in units if u.level == level]
        if not at_level:
            continue

        crime_counts = unit_crime_counts(at_level, crimes)
        lots_in = _lots_by_unit(at_level, lots)

        for unit in sorted(at_level, key=lambda u: u.id):
            land = landuse_props(lots_in[unit.id])
            poverty = (
                poverty_index(unit.poverty_brackets, poverty_weights)
                if unit.poverty_brackets is not None
                else None
            )
            violent, non_violent = crime_counts[unit.id]
            metrics.append(
                UnitMetrics(
                    unit_id=unit.id,
                    level=level,
                    included=unit.included,
                    population=unit.population,
                    area_m2=unit.area_m2,
                    population_density=population_density(unit),
                    per_capita_income=unit.per_capita_income,
                    poverty=poverty,
                    vacant_prop=land.vacant_prop,
                    comres_prop=land.comres_prop,
                    mixeduse_prop=land.mixeduse_prop,
                    violent=violent,
                    non_violent=non_violent,
                )
            )

        ulogger.info(
            f"Computed metrics for {len(at_level)} units at level {level.value}"
        )

    return metrics


def unit_metrics_frame(metrics: Sequence[UnitMetrics]) -> pd.DataFrame:
    return pd.DataFrame(
        [m.to_dict() for m in metrics], columns=UNIT_METRIC_COLUMNS
    )


def crime_time_profile(
    crimes: Sequence[CrimeEvent], windows: Sequence[TimeWindow]
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    How crimes concentrate in time.

    :return: A per-window table (share of each crime type inside the
             window, share of the week the window covers, and their ratio)
             and a 168-row hour-of-week histogram.
    """
    minutes = np.array([c.minute_of_week for c in crimes], dtype=int)
    supers = np.array([c.super.value for c in crimes], dtype=object)

    profile = []
    for window in windows:
        inside = np.array([crime_in_window(c, window) for c in crimes], dtype=bool)
        week_share = window.minutes / MINUTES_PER_WEEK
        for crime_type in [CrimeType.VIOLENT, CrimeType.NON_VIOLENT, CrimeType.ALL]:
            mask = (
                np.ones(len(crimes), dtype=bool)
                if crime_type == CrimeType.ALL
                else supers == crime_type.value
            )
            total = int(mask.sum())
            share = float(inside[mask].sum() / total) if total else None
            profile.append(
                {
                    "window": window.name,
                    "crime_type": crime_type.value,
                    "crimes": total,
                    "crimes_in_window": int(inside[mask].sum()),
                    "crime_share": share,
                    "week_share": week_share,
                    "ratio": share / week_share if share is not None else None,
                }
            )

    hours = minutes // 60
    histogram = pd.DataFrame(
        {
            "hour_of_week": np.arange(168),
            "violent": np.bincount(
                hours[supers == CrimeType.VIOLENT.value], minlength=168
            )[:168],
            "non_violent": np.bincount(
                hours[supers == CrimeType.NON_VIOLENT.value], minlength=168
            )[:168],
        }
    )
    return pd.DataFrame(profile), histogram
