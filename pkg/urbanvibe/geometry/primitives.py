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
Geometry primitives: points, polygons, containment, distance and area.

Distances are great-circle (haversine) meters. Areas use a local
equirectangular projection about the polygon centroid.
"""

from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from shapely.geometry import LinearRing, Polygon

from urbanvibe.classes.errors import DataValidationError, GeometryError

EARTH_RADIUS_M = 6_371_000.0

# Absolute tolerance, in degrees, for the on-edge test.
EDGE_EPS = 1e-12


class GeoPoint:
    """
    A WGS84 location in decimal degrees.

    :attr lon: Longitude in [-180, 180].
    :attr lat: Latitude in [-90, 90].
    """

    __slots__ = ("lon", "lat")

    def __init__(self, lon: float, lat: float):
        lon, lat = float(lon), float(lat)
        if not (-90 <= lat <= 90 and -180 <= lon <= 180):
            raise DataValidationError(f"Coordinates out of range: lon={lon}, lat={lat}")
        self.lon = lon
        self.lat = lat

    def __iter__(self):
        yield self.lon
        yield self.lat

    def __eq__(self, other):
        if not isinstance(other, GeoPoint):
            return NotImplemented
        return self.lon == other.lon and self.lat == other.lat

    def __hash__(self):
        return hash((self.lon, self.lat))

    def __repr__(self) -> str:
        return f"GeoPoint(lon={self.lon}, lat={self.lat})"

    def __getstate__(self):
        return (self.lon, self.lat)

    def __setstate__(self, state):
        self.lon, self.lat = state


PointLike = Union[GeoPoint, Tuple[float, float]]


def _ring_array(ring: Iterable[PointLike]) -> np.ndarray:
    return np.array([tuple(p) for p in ring], dtype=float).reshape(-1, 2)


def validate_ring(ring: np.ndarray, label: str = "ring"):
    """
    Check a ring has at least 4 vertices, is closed and does not cross itself.

    :raises GeometryError: If any check fails.
    """
    if len(ring) < 4:
        raise GeometryError(f"{label} has {len(ring)} vertices, at least 4 needed")
    if not np.array_equal(ring[0], ring[-1]):
        raise GeometryError(f"{label} is not closed (first vertex != last vertex)")
    if not LinearRing(ring).is_simple:
        raise GeometryError(f"{label} is self-intersecting")


class GeoPolygon:
    """
    A polygon with an exterior ring and optional holes.

    Rings are stored as (n, 2) arrays of [lon, lat] with first = last.

    :attr exterior: The exterior ring.
    :attr holes: The interior rings.
    """

    def __init__(
        self,
        exterior: Iterable[PointLike],
        holes: Sequence[Iterable[PointLike]] = (),
        validate: bool = True,
    ):
        self.exterior = _ring_array(exterior)
        self.holes = [_ring_array(h) for h in holes]

        if validate:
            validate_ring(self.exterior, "exterior ring")
            for i, hole in enumerate(self.holes):
                validate_ring(hole, f"hole {i}")

    @property
    def rings(self) -> List[np.ndarray]:
        return [self.exterior, *self.holes]

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        """(min_lon, min_lat, max_lon, max_lat) of the exterior."""
        mins = self.exterior.min(axis=0)
        maxs = self.exterior.max(axis=0)
        return float(mins[0]), float(mins[1]), float(maxs[0]), float(maxs[1])

    def to_shapely(self) -> Polygon:
        return Polygon(self.exterior, [h for h in self.holes])

    @property
    def centroid(self) -> GeoPoint:
        c = self.to_shapely().centroid
        if c.is_empty:
            lon, lat = self.exterior[:-1].mean(axis=0)
            return GeoPoint(lon, lat)
        return GeoPoint(c.x, c.y)

    def __repr__(self) -> str:
        return f"GeoPolygon({len(self.exterior)} vertices, {len(self.holes)} holes)"


def contains_many(
    polygon: GeoPolygon, lons: Sequence[float], lats: Sequence[float]
) -> np.ndarray:
    """
    Vectorised even-odd point-in-polygon test.

    Points exactly on any ring edge count as inside.

    :param polygon: The (validated) polygon.
    :param lons: Longitudes of the points.
    :param lats: Latitudes of the points.

    :return: Boolean array, one entry per point.
    """
    px = np.asarray(lons, dtype=float).reshape(-1, 1)
    py = np.asarray(lats, dtype=float).reshape(-1, 1)

    inside = np.zeros(len(px), dtype=bool)
    on_edge = np.zeros(len(px), dtype=bool)

    for ring in polygon.rings:
        x1, y1 = ring[:-1, 0], ring[:-1, 1]
        x2, y2 = ring[1:, 0], ring[1:, 1]

        straddles = (y1 > py) != (y2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = (x2 - x1) * (py - y1) / (y2 - y1) + x1
        crossings = np.count_nonzero(straddles & (px < x_cross), axis=1)
        inside ^= crossings % 2 == 1

        cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        within = (
            (px >= np.minimum(x1, x2) - EDGE_EPS)
            & (px <= np.maximum(x1, x2) + EDGE_EPS)
            & (py >= np.minimum(y1, y2) - EDGE_EPS)
            & (py <= np.maximum(y1, y2) + EDGE_EPS)
        )
        on_edge |= np.any((np.abs(cross) <= EDGE_EPS) & within, axis=1)

    return inside | on_edge


def contains(polygon: GeoPolygon, p: GeoPoint) -> bool:
    """
    Even-odd ray-cast containment. On-edge points count as inside.

    :param polygon: A polygon validated at load time.
    :param p: The point.
    """
    return bool(contains_many(polygon, [p.lon], [p.lat])[0])


def haversine_m(lat1, lon1, lat2, lon2) -> np.ndarray:
    """
    Great-circle distance in meters. Broadcasts over array inputs.
    """
    lat1, lon1, lat2, lon2 = (
        np.radians(np.asarray(v, dtype=float)) for v in (lat1, lon1, lat2, lon2)
    )
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


def distance_m(a: GeoPoint, b: GeoPoint) -> float:
    """
    Haversine distance between two points, mean Earth radius 6,371,000 m.
    """
    return float(haversine_m(a.lat, a.lon, b.lat, b.lon))


def offset_m(origin: GeoPoint, east_m: float, north_m: float) -> GeoPoint:
    """
    Move a point by local east/north offsets (equirectangular).
    """
    lat = origin.lat + np.degrees(north_m / EARTH_RADIUS_M)
    lon = origin.lon + np.degrees(
        east_m / (EARTH_RADIUS_M * np.cos(np.radians(origin.lat)))
    )
    return GeoPoint(float(lon), float(lat))


def project_m(
    lons: np.ndarray, lats: np.ndarray, origin: Tuple[float, float]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Equirectangular projection to meters about origin (lon, lat).
    """
    lon0, lat0 = origin
    x = EARTH_RADIUS_M * np.radians(np.asarray(lons) - lon0) * np.cos(np.radians(lat0))
    y = EARTH_RADIUS_M * np.radians(np.asarray(lats) - lat0)
    return x, y


def unproject_m(
    x: np.ndarray, y: np.ndarray, origin: Tuple[float, float]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Inverse of `project_m`.
    """
    lon0, lat0 = origin
    lats = lat0 + np.degrees(np.asarray(y) / EARTH_RADIUS_M)
    lons = lon0 + np.degrees(
        np.asarray(x) / (EARTH_RADIUS_M * np.cos(np.radians(lat0)))
    )
    return lons, lats


def _shoelace(x: np.ndarray, y: np.ndarray) -> float:
    return 0.5 * abs(float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1])))


def planar_area_m2(polygon: GeoPolygon) -> float:
    """
    Area in square meters after a local equirectangular projection.

    Holes are subtracted. Orientation does not matter.
    """
    ring = polygon.exterior
    if len(ring) < 2:
        return 0.0

    origin = tuple(polygon.centroid)

    area = _shoelace(*project_m(ring[:, 0], ring[:, 1], origin))
    for hole in polygon.holes:
        area -= _shoelace(*project_m(hole[:, 0], hole[:, 1], origin))

    return max(area, 0.0)
