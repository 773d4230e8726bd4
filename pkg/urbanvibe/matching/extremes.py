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
Highest and lowest crime locations inside a unit.

Candidate locations are the nodes of a regular grid (10 m by default)
clipped to the unit. The crime frequency of a candidate is the number of
qualifying crimes within the counting radius. Candidates are scanned row
by row from south to north and west to east within a row; the first
maximum is the high location and the first minimum the low one.
"""

from typing import NamedTuple, Optional, Sequence

import numpy as np

from urbanvibe.classes.enums import CrimeType
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.geometry.index import SpatialIndex
from urbanvibe.geometry.primitives import GeoPoint, distance_m, project_m, unproject_m
from urbanvibe.ingest.classes import CrimeEvent, GeoUnit
from urbanvibe.ingest.records import crime_in_window


class Candidates(NamedTuple):
    lons: np.ndarray
    lats: np.ndarray


class Extremes(NamedTuple):
    hi: GeoPoint
    lo: GeoPoint
    hi_count: int
    lo_count: int
    separation_m: float


def candidate_grid(unit: GeoUnit, spacing: float) -> Candidates:
    """
    Grid nodes inside the unit, in (row, col) scan order.

    Nodes sit at the bounding box corner plus whole multiples of the
    spacing, measured in a local projection about that corner.
    """
    min_lon, min_lat, max_lon, max_lat = unit.bounds
    origin = (min_lon, min_lat)

    x_max, y_max = project_m(np.array([max_lon]), np.array([max_lat]), origin)
    xs = np.arange(0.0, float(x_max[0]) + spacing * 1e-9, spacing)
    ys = np.arange(0.0, float(y_max[0]) + spacing * 1e-9, spacing)

    gx, gy = np.meshgrid(xs, ys)
    lons, lats = unproject_m(gx.ravel(), gy.ravel(), origin)

    inside = unit.contains_many(lons, lats)
    return Candidates(lons[inside], lats[inside])


def qualifying_crimes(
    crimes: Sequence[CrimeEvent], crime_type: CrimeType, window: TimeWindow = None
) -> list:
    """
    Crimes of a type (ALL keeps both super-categories) inside a window.
    """
    crime_type = CrimeType(crime_type)
    return [
        c
        for c in crimes
        if crime_type.matches(c.super) and crime_in_window(c, window)
    ]


def crime_index(
    crimes: Sequence[CrimeEvent], crime_type: CrimeType, window: TimeWindow = None
) -> SpatialIndex:
    qualifying = qualifying_crimes(crimes, crime_type, window)
    return SpatialIndex([c.where for c in qualifying])


def locate_extreme_crime(
    unit: GeoUnit,
    crimes: Sequence[CrimeEvent],
    crime_type: CrimeType,
    window: TimeWindow = None,
    radius: float = 50.0,
    grid_spacing: float = 10.0,
    min_separation: float = 100.0,
    index: SpatialIndex = None,
) -> Optional[Extremes]:
    """
    The highest and lowest crime locations of a unit.

    :param unit: The unit.
    :param crimes: All crimes. Ignored when `index` is given.
    :param crime_type: Violent, non-violent or all.
    :param window: Only crimes inside this window count. None is the week.
    :param radius: Counting radius in meters.
    :param grid_spacing: Candidate grid spacing in meters.
    :param min_separation: Smallest allowed distance between hi and lo.
    :param index: Prebuilt `crime_index(crimes, crime_type, window)`.

    :return: The extremes, or None when the unit has no candidate, no
             qualifying crime near any candidate, or the two locations are
             closer than `min_separation`.
    """
    index = index if index is not None else crime_index(crimes, crime_type, window)
    grid = candidate_grid(unit, grid_spacing)
    if len(grid.lons) == 0:
        return None

    counts = index.count_within_many(grid.lats, grid.lons, radius)
    if counts.max() == 0:
        return None

    hi_i = int(np.argmax(counts))
    lo_i = int(np.argmin(counts))
    hi = GeoPoint(float(grid.lons[hi_i]), float(grid.lats[hi_i]))
    lo = GeoPoint(float(grid.lons[lo_i]), float(grid.lats[lo_i]))

    separation = distance_m(hi, lo)
    if separation < min_separation:
        return None

    return Extremes(hi, lo, int(counts[hi_i]), int(counts[lo_i]), separation)
