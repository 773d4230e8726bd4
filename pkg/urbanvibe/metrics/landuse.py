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
Metric: Land Use Proportions

Vacant.Prop = vacant area / total lot area
ComRes.Prop = commercial area / (commercial + residential area)
MixedUse.Prop = mixed use area / total lot area
"""

from collections import defaultdict
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence

from urbanvibe.classes.enums import Zoning
from urbanvibe.geometry.index import SpatialIndex
from urbanvibe.geometry.primitives import GeoPoint
from urbanvibe.ingest.classes import LandLot


class LandUse(NamedTuple):
    vacant_prop: Optional[float]
    comres_prop: Optional[float]
    mixeduse_prop: Optional[float]


NO_LAND_USE = LandUse(None, None, None)


def zoning_areas(lots: Iterable[LandLot]) -> Dict[Zoning, float]:
    areas = defaultdict(float)
    for lot in lots:
        areas[lot.zoning] += lot.area_m2
    return areas


def landuse_props(lots: Iterable[LandLot]) -> LandUse:
    """
    Land use proportions of a set of lots.

    :param lots: The lots assigned to a unit (or found near a location).

    :return: The three proportions. All are None when there is no lot
             area; comres_prop alone is None when there is neither
             commercial nor residential area.
    """
    areas = zoning_areas(lots)
    total = sum(areas.values())
    if not total > 0:
        return NO_LAND_USE

    commercial = areas[Zoning.COMMERCIAL]
    residential = areas[Zoning.RESIDENTIAL]
    comres = (
        commercial / (commercial + residential)
        if commercial + residential > 0
        else None
    )

    return LandUse(
        vacant_prop=areas[Zoning.VACANT] / total,
        comres_prop=comres,
        mixeduse_prop=areas[Zoning.MIXED_USE] / total,
    )


def lot_index(lots: Sequence[LandLot]) -> SpatialIndex:
    return SpatialIndex([lot.location for lot in lots])


def landuse_in_radius(
    center: GeoPoint,
    radius: float,
    lots: Sequence[LandLot],
    index: SpatialIndex = None,
) -> LandUse:
    """
    Land use proportions of the lots whose centroid lies within the radius.

    :param center: The location.
    :param radius: Meters.
    :param lots: All lots.
    :param index: A prebuilt `lot_index(lots)`, to reuse across queries.
    """
    index = index or lot_index(lots)
    positions: List[int] = index.query_positions(center, radius).tolist()
    return landuse_props(lots[i] for i in positions)
