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

import pytest

from urbanvibe.geometry.index import SpatialIndex, radius_query
from urbanvibe.geometry.primitives import distance_m, offset_m


@pytest.fixture
def ring_points(origin):
    # 10, 20, ... 100 m east of the origin
    return [offset_m(origin, 10 * (i + 1), 0) for i in range(10)]


def test_radius_query_exact(origin, ring_points):
    index = SpatialIndex(ring_points, keys=[f"p{i}" for i in range(10)])
    found = radius_query(index, origin, 35)
    expected = {
        f"p{i}" for i, p in enumerate(ring_points) if distance_m(origin, p) <= 35
    }
    assert found == expected == {"p0", "p1", "p2"}


def test_radius_query_boundary_inclusive(origin, ring_points):
    index = SpatialIndex(ring_points)
    r = distance_m(origin, ring_points[4]) + 1e-6
    assert 4 in radius_query(index, origin, r)
    assert 5 not in radius_query(index, origin, r)


def test_radius_query_non_positive_radius(origin, ring_points):
    index = SpatialIndex(ring_points)
    with pytest.raises(ValueError, match="must be positive"):
        radius_query(index, origin, 0)
    with pytest.raises(ValueError, match="must be positive"):
        radius_query(index, origin, -5)


def test_empty_index(origin):
    index = SpatialIndex([])
    assert len(index) == 0
    assert radius_query(index, origin, 100) == set()
    assert index.count_within_many([origin.lat], [origin.lon], 100).tolist() == [0]


def test_keys_length_mismatch(ring_points):
    with pytest.raises(ValueError, match="same length"):
        SpatialIndex(ring_points, keys=["a"])


def test_query_positions_sorted(origin, ring_points):
    index = SpatialIndex(ring_points[::-1])
    positions = index.query_positions(origin, 55).tolist()
    assert positions == sorted(positions)
    assert len(positions) == 5


def test_count_within_many(origin, ring_points):
    index = SpatialIndex(ring_points)
    far = offset_m(origin, 0, 1000)
    counts = index.count_within_many(
        [origin.lat, far.lat], [origin.lon, far.lon], 45
    )
    assert counts.tolist() == [4, 0]


def test_duplicate_points(origin):
    index = SpatialIndex([origin, origin, origin], keys=["a", "b", "c"])
    assert radius_query(index, origin, 1) == {"a", "b", "c"}
