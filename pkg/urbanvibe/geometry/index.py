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
Spatial index for radius queries over large point sets.

Built on a haversine BallTree. The tree returns a slightly widened
candidate set, which is then filtered with the exact haversine distance,
so results equal a brute-force scan.
"""

from typing import Any, Hashable, List, Optional, Sequence, Set

import numpy as np
from sklearn.neighbors import BallTree

from urbanvibe.geometry.primitives import EARTH_RADIUS_M, GeoPoint, haversine_m

# Relative widening of the tree query before the exact filter.
QUERY_SLACK = 1e-9


class SpatialIndex:
    """
    Read-only index over points, each carrying a key.

    :attr keys: The key of every indexed point, in input order.
    :attr lats: Latitudes, in input order.
    :attr lons: Longitudes, in input order.
    """

    def __init__(self, points: Sequence[GeoPoint], keys: Sequence[Hashable] = None):
        """
        Bulk-load the index.

        :param points: The points to index.
        :param keys: One key per point. Defaults to the point positions.
        """
        self.keys: List[Any] = (
            list(keys) if keys is not None else list(range(len(points)))
        )
        if len(self.keys) != len(points):
            raise ValueError("keys and points must have the same length")

        self.lats = np.array([p.lat for p in points], dtype=float)
        self.lons = np.array([p.lon for p in points], dtype=float)

        self._tree: Optional[BallTree] = None
        if len(points):
            self._tree = BallTree(
                np.radians(np.column_stack([self.lats, self.lons])),
                metric="haversine",
            )

    def __len__(self) -> int:
        return len(self.keys)

    def query_positions(self, center: GeoPoint, r: float) -> np.ndarray:
        """
        Positions (into `keys`) of the points within r meters, sorted.

        :raises ValueError: If r <= 0.
        """
        return self.query_positions_many([center.lat], [center.lon], r)[0]

    def query_positions_many(
        self, lats: Sequence[float], lons: Sequence[float], r: float
    ) -> List[np.ndarray]:
        """
        Batch version of `query_positions`, one result per center.

        :raises ValueError: If r <= 0.
        """
        if not r > 0:
            raise ValueError(f"Query radius must be positive, got {r}")

        lats = np.asarray(lats, dtype=float)
        lons = np.asarray(lons, dtype=float)

        if len(lats) == 0:
            return []

        if self._tree is None:
            return [np.empty(0, dtype=int) for _ in range(len(lats))]

        widened = r / EARTH_RADIUS_M * (1 + QUERY_SLACK)
        candidates = self._tree.query_radius(
            np.radians(np.column_stack([lats, lons])), widened
        )

        results = []
        for lat, lon, cand in zip(lats, lons, candidates):
            cand = np.sort(cand)
            d = haversine_m(lat, lon, self.lats[cand], self.lons[cand])
            results.append(cand[d <= r])
        return results

    def count_within_many(
        self, lats: Sequence[float], lons: Sequence[float], r: float
    ) -> np.ndarray:
        """
        Number of indexed points within r meters of each center.
        """
        return np.array(
            [len(p) for p in self.query_positions_many(lats, lons, r)], dtype=int
        )

    def radius_query(self, center: GeoPoint, r: float) -> Set[Any]:
        """
        Keys of the points with distance_m <= r, boundary inclusive.

        :raises ValueError: If r <= 0.
        """
        return {self.keys[i] for i in self.query_positions(center, r)}


def radius_query(index: SpatialIndex, center: GeoPoint, r: float) -> Set[Any]:
    """
    Exactly the indexed items within r meters of center.

    :param index: A built index.
    :param center: Query center.
    :param r: Radius in meters, must be positive.

    :raises ValueError: If r <= 0.
    """
    return index.radius_query(center, r)
