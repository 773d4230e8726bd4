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
Open-longer vs open-shorter businesses of the same type within a unit.

Per business type, "long" businesses are open more whole-week hours than
the high percentile of that type and "short" ones fewer than the low
percentile. In each unit the qualifying (long, short) pair furthest apart,
at least the minimum separation, is compared on the crimes around the two
businesses. Differences are short - long.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from urbanvibe.classes.enums import BusinessType, CrimeType, Study, UnitLevel
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.geometry.assign import UNASSIGNED, assign_points_to_units
from urbanvibe.geometry.primitives import distance_m
from urbanvibe.ingest.classes import Business, CrimeEvent, GeoUnit
from urbanvibe.logs import ulogger
from urbanvibe.matching.classes import LocationPair, MatchedPairReport
from urbanvibe.matching.extremes import crime_index
from urbanvibe.matching.stats import adjust_family, cell_report
from urbanvibe.settings.subconfig import MatchingConfig

HOURS_CRIME_TYPES = [CrimeType.VIOLENT, CrimeType.NON_VIOLENT, CrimeType.ALL]


def hours_thresholds(
    businesses: Sequence[Business],
    low_percentile: float = 25.0,
    high_percentile: float = 75.0,
) -> Dict[BusinessType, Tuple[float, float]]:
    """
    Per business type, the low and high percentiles of whole-week open
    hours over the businesses of the type with a schedule.
    """
    thresholds = {}
    for business_type in BusinessType.ALL():
        hours = [
            b.schedule.hours
            for b in businesses
            if business_type in b.types and b.schedule is not None
        ]
        if hours:
            thresholds[business_type] = (
                float(np.percentile(hours, low_percentile)),
                float(np.percentile(hours, high_percentile)),
            )
    return thresholds


def best_pair(
    long: Sequence[Business], short: Sequence[Business], min_separation: float
) -> Optional[Tuple[Business, Business, float]]:
    """
    The (long, short) pair with the largest separation, if any is at least
    `min_separation` apart. Ties go to the smallest (long id, short id).
    """
    best = None
    for a, b in product(long, short):
        if a.id == b.id:
            continue
        separation = distance_m(a.where, b.where)
        if separation < min_separation:
            continue
        key = (-separation, a.id, b.id)
        if best is None or key < best[0]:
            best = (key, a, b, separation)
    if best is None:
        return None
    return best[1], best[2], best[3]


def find_hours_pairs(
    units: Sequence[GeoUnit],
    businesses: Sequence[Business],
    config: MatchingConfig,
) -> List[LocationPair]:
    """
    The chosen (long, short) pair of each unit and business type.

    `hi` is the long business and `lo` the short one; `measure` is the type.
    """
    thresholds = hours_thresholds(
        businesses, config.low_percentile, config.high_percentile
    )
    with_hours = [b for b in businesses if b.schedule is not None]
    units = sorted(units, key=lambda u: u.id)
    assigned = assign_points_to_units([b.where for b in with_hours], units)

    by_unit: Dict[str, List[Business]] = {u.id: [] for u in units}
    for unit_id, business in zip(assigned, with_hours):
        if unit_id != UNASSIGNED:
            by_unit[unit_id].append(business)

    pairs = []
    for unit in units:
        members = sorted(by_unit[unit.id], key=lambda b: b.id)
        for business_type, (low, high) in sorted(
            thresholds.items(), key=lambda kv: kv[0].value
        ):
            of_type = [b for b in members if business_type in b.types]
            long = [b for b in of_type if b.schedule.hours > high]
            short = [b for b in of_type if b.schedule.hours < low]
            chosen = best_pair(long, short, config.hours_separation_m)
            if chosen is None:
                continue
            a, b, separation = chosen
            pairs.append(
                LocationPair(
                    unit.id,
                    a.where,
                    b.where,
                    None,
                    None,
                    separation,
                    study=Study.HOURS,
                    measure=business_type.value,
                )
            )

    ulogger.info(f"hours: {len(pairs)} long/short pairs in {len(units)} units")
    return pairs


def study_hours(
    units: Sequence[GeoUnit],
    crimes: Sequence[CrimeEvent],
    businesses: Sequence[Business],
    windows: Sequence[TimeWindow],
    config: MatchingConfig = None,
) -> Tuple[List[MatchedPairReport], List[LocationPair]]:
    """
    Run the open hours matched pairs study.

    Long and short are decided on whole-week hours; each window only
    restricts which crimes are counted around the businesses. The table is
    one Bonferroni family.

    :param units: All units; those at `config.hours_level` passing the
                  population filter take part.
    :param crimes: All crimes.
    :param businesses: Deduplicated businesses.
    :param windows: Time windows.
    :param config: Radius, separation, percentiles, level and alpha.

    :return: The table and the pairs used (one per unit and type).
    """
    config = config or MatchingConfig()
    level = UnitLevel(config.hours_level)
    pairs = find_hours_pairs(
        [u for u in units if u.level == level and u.included], businesses, config
    )

    cells = []
    for crime_type, window in product(HOURS_CRIME_TYPES, windows):
        index = crime_index(crimes, crime_type, window)
        differences: Dict[str, List[float]] = {t.value: [] for t in BusinessType.ALL()}
        for pair in pairs:
            long_count, short_count = index.count_within_many(
                [pair.hi.lat, pair.lo.lat],
                [pair.hi.lon, pair.lo.lon],
                config.hours_radius_m,
            ).tolist()
            differences[pair.measure].append(float(short_count - long_count))

        for business_type in BusinessType.ALL():
            cells.append(
                cell_report(
                    Study.HOURS,
                    business_type.value,
                    crime_type,
                    window.name,
                    differences[business_type.value],
                )
            )

    return adjust_family(cells, config.alpha), pairs
