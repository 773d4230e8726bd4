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
Point-in-unit assignment.

Candidate units come from a shapely STRtree over unit bounding boxes; the
final decision is the even-odd `contains` test. A point inside several
units goes to the one with the smallest area (ties by id).
"""

from collections import defaultdict
from typing import TYPE_CHECKING, Dict, List, Sequence

import numpy as np
import shapely
from shapely.strtree import STRtree

from urbanvibe.geometry.primitives import GeoPoint, contains_many
from urbanvibe.logs import ulogger

if TYPE_CHECKING:
    from urbanvibe.ingest.classes import GeoUnit

UNASSIGNED = "unassigned"


def assign_points_to_units(
    points: Sequence[GeoPoint], units: Sequence["GeoUnit"]
) -> List[str]:
    """
    Map each point to the id of the unit containing it.

    :param points: The points to assign.
    :param units: Units with `id`, `area_m2` and `polygons`.

    :return: One unit id per point, in point order; UNASSIGNED when
             no unit contains the point.
    """
    assigned = [UNASSIGNED] * len(points)
    if not points or not units:
        return assigned

    boxes, owners = [], []
    for u, unit in enumerate(units):
        for polygon in unit.polygons:
            boxes.append(shapely.box(*polygon.bounds))
            owners.append((u, polygon))

    tree = STRtree(boxes)

    lons = np.array([p.lon for p in points], dtype=float)
    lats = np.array([p.lat for p in points], dtype=float)

    point_idx, box_idx = tree.query(shapely.points(lons, lats))

    by_box: Dict[int, List[int]] = defaultdict(list)
    for p, b in zip(point_idx.tolist(), box_idx.tolist()):
        by_box[b].append(p)

    hits: Dict[int, set] = defaultdict(set)
    for b in sorted(by_box):
        u, polygon = owners[b]
        candidates = np.array(by_box[b], dtype=int)
        inside = contains_many(polygon, lons[candidates], lats[candidates])
        for p in candidates[inside].tolist():
            hits[p].add(u)

    collisions = 0
    for p, unit_idx in hits.items():
        if len(unit_idx) > 1:
            collisions += 1
            winner = min(unit_idx, key=lambda u: (units[u].area_m2, units[u].id))
            ulogger.debug(
                f"Point {p} lies in units "
                f"{sorted(units[u].id for u in unit_idx)}, "
                f"assigned to {units[winner].id}"
            )
        else:
            (winner,) = unit_idx
        assigned[p] = units[winner].id

    if collisions:
        ulogger.info(
            f"{collisions} points fell in overlapping units, "
            "resolved by smallest unit area."
        )

    return assigned
