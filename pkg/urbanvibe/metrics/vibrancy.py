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
Metric: Business Vibrancy and Ownership Tenure near a Location

Around a location we count the businesses of each type and average their
excess open hours, and average the years since the last sale of the
residential properties nearby.
"""

from datetime import date
from typing import Dict, Optional, Sequence

import numpy as np

from urbanvibe.classes.enums import BusinessType
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.geometry.index import SpatialIndex
from urbanvibe.geometry.primitives import GeoPoint
from urbanvibe.ingest.classes import Business, PropertyRecord
from urbanvibe.metrics.hours import ConsensusTable, consensus_table, excess_hours

DAYS_PER_YEAR = 365.25


class VibrancyAtLocation:
    """
    Business vibrancy and tenure measured around one location.

    :attr counts: Businesses of each type within the radius.
    :attr excess: Mean excess hours of each type, over the businesses with
                  hours in the radius. None when there are none.
    :attr tenure_years: Mean years since last sale of residential
                        properties in the tenure radius, None if none.
    """

    def __init__(
        self,
        center: GeoPoint,
        radius: float,
        counts: Dict[BusinessType, int],
        excess: Dict[BusinessType, Optional[float]],
        tenure_years: Optional[float],
        window: str = "week",
    ):
        self.center = center
        self.radius = radius
        self.counts = counts
        self.excess = excess
        self.tenure_years = tenure_years
        self.window = window

    def to_dict(self) -> dict:
        row = {
            "lon": self.center.lon,
            "lat": self.center.lat,
            "radius_m": self.radius,
            "window": self.window,
        }
        for business_type in BusinessType.ALL():
            row[f"count_{business_type.value}"] = self.counts[business_type]
        for business_type in BusinessType.ALL():
            row[f"excess_{business_type.value}"] = self.excess[business_type]
        row["tenure_years"] = self.tenure_years
        return row


class VibrancyIndex:
    """
    Spatial indices over businesses and residential properties, plus the
    per-window consensus hours, built once and queried per location.

    The whole week is always indexed. Other windows not given here get
    their consensus recomputed on every query.
    """

    def __init__(
        self,
        businesses: Sequence[Business],
        properties: Sequence[PropertyRecord],
        windows: Sequence[TimeWindow],
        ingest_date: date,
    ):
        self.businesses = list(businesses)
        self.residential = [p for p in properties if p.residential]
        self.windows = {w.name: w for w in [TimeWindow.whole_week(), *windows]}
        self.ingest_date = ingest_date

        self.business_index = SpatialIndex([b.where for b in self.businesses])
        self.property_index = SpatialIndex([p.where for p in self.residential])
        self.consensus: ConsensusTable = consensus_table(
            self.businesses, list(self.windows.values())
        )

        self.tenure = np.array(
            [
                (ingest_date - p.last_sale_date).days / DAYS_PER_YEAR
                for p in self.residential
            ],
            dtype=float,
        )

    def at(
        self,
        center: GeoPoint,
        radius: float,
        window: TimeWindow = None,
        tenure_radius: float = None,
    ) -> VibrancyAtLocation:
        """
        Vibrancy around one location.

        :param center: The location.
        :param radius: Business radius in meters.
        :param window: Window for the excess hours. None is the whole week.
        :param tenure_radius: Tenure radius. None uses the business radius.
        """
        window = window or TimeWindow.whole_week()
        consensus = (
            self.consensus
            if window.name in self.windows
            else consensus_table(self.businesses, [window])
        )

        counts = {t: 0 for t in BusinessType.ALL()}
        sums = {t: 0.0 for t in BusinessType.ALL()}
        with_hours = {t: 0 for t in BusinessType.ALL()}

        for i in self.business_index.query_positions(center, radius).tolist():
            business = self.businesses[i]
            for business_type in business.types:
                counts[business_type] += 1
                e = excess_hours(
                    business, consensus[(business_type, window.name)], window
                )
                if e is not None:
                    sums[business_type] += e
                    with_hours[business_type] += 1

        excess = {
            t: (sums[t] / with_hours[t] if with_hours[t] else None)
            for t in BusinessType.ALL()
        }

        near = self.property_index.query_positions(center, tenure_radius or radius)
        tenure = float(self.tenure[near].mean()) if len(near) else None

        return VibrancyAtLocation(center, radius, counts, excess, tenure, window.name)


def vibrancy_at(
    center: GeoPoint,
    radius: float,
    businesses: Sequence[Business],
    properties: Sequence[PropertyRecord],
    window: TimeWindow = None,
    *,
    ingest_date: date,
    tenure_radius: float = None,
) -> VibrancyAtLocation:
    """
    Business counts, mean excess hours and ownership tenure near a location.

    Builds a throwaway `VibrancyIndex`; build one yourself for many queries.

    :param center: The location.
    :param radius: Meters.
    :param businesses: All businesses (the consensus is computed over them).
    :param properties: All property records.
    :param window: Window for the excess hours. None is the whole week.
    :param ingest_date: Reference date for tenure.
    :param tenure_radius: Tenure radius. None uses `radius`.
    """
    window = window or TimeWindow.whole_week()
    index = VibrancyIndex(businesses, properties, [window], ingest_date)
    return index.at(center, radius, window, tenure_radius)
