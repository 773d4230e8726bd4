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
High-crime vs low-crime locations within a unit.

For each unit the highest and lowest crime locations are compared on the
business vibrancy around them (counts and mean excess hours per business
type) and on land use and ownership tenure. Differences are lo - hi.
"""

from datetime import date
from typing import Dict, List, Sequence, Tuple

from urbanvibe.classes.enums import BusinessType, CrimeType, Study, UnitLevel
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.ingest.classes import (
    Business,
    CrimeEvent,
    GeoUnit,
    LandLot,
    PropertyRecord,
)
from urbanvibe.matching.classes import LocationPair, MatchedPairReport
from urbanvibe.matching.pairs import find_high_low_pairs
from urbanvibe.matching.stats import adjust_family, cell_report
from urbanvibe.metrics.landuse import landuse_in_radius, lot_index
from urbanvibe.metrics.vibrancy import VibrancyIndex
from urbanvibe.settings.subconfig import MatchingConfig

LANDUSE_MEASURES = ["vacant_prop", "mixeduse_prop", "comres_prop", "tenure_years"]


def business_measures() -> List[str]:
    return [f"count:{t.value}" for t in BusinessType.ALL()] + [
        f"excess_hours:{t.value}" for t in BusinessType.ALL()
    ]


def business_differences(
    pair: LocationPair, vibrancy: VibrancyIndex, radius: float, window: TimeWindow
) -> Dict[str, float]:
    """
    lo - hi differences of the business measures of one pair.

    A business type absent from both locations is left out of that type's
    comparisons; an excess hours measure needs hours at both locations.
    """
    hi = vibrancy.at(pair.hi, radius, window)
    lo = vibrancy.at(pair.lo, radius, window)

    out = {}
    for business_type in BusinessType.ALL():
        if hi.counts[business_type] == 0 and lo.counts[business_type] == 0:
            continue
        out[f"count:{business_type.value}"] = float(
            lo.counts[business_type] - hi.counts[business_type]
        )
        e_hi, e_lo = hi.excess[business_type], lo.excess[business_type]
        if e_hi is not None and e_lo is not None:
            out[f"excess_hours:{business_type.value}"] = e_lo - e_hi
    return out


def landuse_differences(
    pair: LocationPair,
    lots: Sequence[LandLot],
    lots_index,
    vibrancy: VibrancyIndex,
    radius: float,
    tenure_radius: float,
) -> Dict[str, float]:
    """
    lo - hi differences of land use and tenure; undefined values drop out.
    """
    hi = landuse_in_radius(pair.hi, radius, lots, lots_index)._asdict()
    lo = landuse_in_radius(pair.lo, radius, lots, lots_index)._asdict()
    for side, point in ((hi, pair.hi), (lo, pair.lo)):
        side["tenure_years"] = vibrancy.at(
            point, radius, tenure_radius=tenure_radius
        ).tenure_years

    return {
        measure: lo[measure] - hi[measure]
        for measure in LANDUSE_MEASURES
        if hi[measure] is not None and lo[measure] is not None
    }


def _collect(
    study: Study,
    measures: List[str],
    crime_type: CrimeType,
    window: str,
    per_pair: List[Dict[str, float]],
) -> List[MatchedPairReport]:
    return [
        cell_report(
            study,
            measure,
            crime_type,
            window,
            [d[measure] for d in per_pair if measure in d],
        )
        for measure in measures
    ]


def study_high_low(
    units: Sequence[GeoUnit],
    crimes: Sequence[CrimeEvent],
    businesses: Sequence[Business],
    properties: Sequence[PropertyRecord],
    lots: Sequence[LandLot],
    windows: Sequence[TimeWindow],
    config: MatchingConfig = None,
    *,
    ingest_date: date,
    tenure_radius: float = None,
) -> Tuple[List[MatchedPairReport], List[MatchedPairReport], List[LocationPair]]:
    """
    Run the high/low crime matched pairs study.

    Business measures use units at `config.hilo_business_level`; land use
    and tenure use units at `config.hilo_landuse_level`. Only units passing
    the population filter take part. Each table is one Bonferroni family.

    :param units: All units.
    :param crimes: All crimes.
    :param businesses: Deduplicated businesses.
    :param properties: Property records, for tenure.
    :param lots: Land lots, for land use.
    :param windows: Time windows; each gets its own pairs.
    :param config: Radii, separation, grid, levels and alpha.
    :param ingest_date: Tenure reference date.
    :param tenure_radius: Tenure radius. None uses the high/low radius.

    :return: The business table, the land use table and every pair used.
    """
    config = config or MatchingConfig()
    radius = config.hilo_radius_m
    tenure_radius = tenure_radius or radius

    vibrancy = VibrancyIndex(businesses, properties, windows, ingest_date)
    lots_index = lot_index(lots)

    def at_level(level: UnitLevel) -> List[GeoUnit]:
        return [u for u in units if u.level == level and u.included]

    business_cells, landuse_cells, pairs = [], [], []
    for crime_type in CrimeType.SUPERS():
        for window in windows:
            found = find_high_low_pairs(
                at_level(config.hilo_business_level),
                crimes,
                crime_type,
                window,
                config,
                Study.HIGH_LOW,
            )
            pairs.extend(found)
            business_cells += _collect(
                Study.HIGH_LOW,
                business_measures(),
                crime_type,
                window.name,
                [business_differences(p, vibrancy, radius, window) for p in found],
            )

            found = find_high_low_pairs(
                at_level(config.hilo_landuse_level),
                crimes,
                crime_type,
                window,
                config,
                Study.HIGH_LOW_LANDUSE,
            )
            pairs.extend(found)
            landuse_cells += _collect(
                Study.HIGH_LOW_LANDUSE,
                LANDUSE_MEASURES,
                crime_type,
                window.name,
                [
                    landuse_differences(
                        p, lots, lots_index, vibrancy, radius, tenure_radius
                    )
                    for p in found
                ],
            )

    return (
        adjust_family(business_cells, config.alpha),
        adjust_family(landuse_cells, config.alpha),
        pairs,
    )
