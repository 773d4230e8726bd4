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

import json

import numpy as np
import pytest

from tests.fixtures.unit import ORIGIN
from urbanvibe.classes.enums import BusinessType, Source
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.geometry.primitives import distance_m, offset_m
from urbanvibe.ingest.businesses import (
    business_to_listing,
    dedup_businesses,
    load_category_map,
    load_listings,
    map_categories,
    name_similarity,
    normalize_name,
)
from urbanvibe.ingest.classes import RawListing


@pytest.fixture(scope="module")
def category_map():
    return load_category_map()


def listing(origin, source, source_id, name, east=0.0, north=0.0, **kwargs):
    where = offset_m(origin, east, north)
    return RawListing(
        source=source,
        source_id=source_id,
        name=name,
        lat=where.lat,
        lon=where.lon,
        **kwargs,
    )


def test_normalize_name():
    assert normalize_name("Café Olé's") == frozenset({"cafe", "oles"})
    assert normalize_name("JOE'S  Pizza-Bar") == frozenset({"joes", "pizza", "bar"})
    assert normalize_name("") == frozenset()


def test_name_similarity():
    a = normalize_name("Joe's Pizza")
    b = normalize_name("joes pizza")
    c = normalize_name("Joe's Pizza Bar")
    assert name_similarity(a, b) == 1.0
    assert name_similarity(a, c) == pytest.approx(2 / 3)
    assert name_similarity(a, frozenset()) == 0.0


def test_load_category_map(category_map):
    assert category_map["coffee_shop"] == frozenset({BusinessType.CAFE})
    assert category_map["gym"] == frozenset({BusinessType.GYM})
    # type names map onto themselves
    assert category_map["nightlife"] == frozenset({BusinessType.NIGHTLIFE})


def test_load_category_map_unknown_type(tmp_path):
    path = tmp_path / "map.csv"
    path.write_text("raw_category,business_type\nbank,Bank\n")
    with pytest.raises(DataValidationError, match="Unknown business type"):
        load_category_map(str(path))


def test_load_category_map_missing_file(tmp_path):
    with pytest.raises(DataValidationError, match="not found"):
        load_category_map(str(tmp_path / "nope.csv"))


def test_map_categories_unmapped_falls_back(category_map):
    assert map_categories(["cafe", "gym"], category_map) == frozenset(
        {BusinessType.CAFE, BusinessType.GYM}
    )
    assert map_categories(["unheard_of"], category_map) == frozenset(
        {BusinessType.INSTITUTION}
    )
    assert map_categories([], category_map) == frozenset({BusinessType.INSTITUTION})


def test_dedup_merges_across_sources(origin, category_map):
    listings = [
        listing(origin, Source.B, "7", "Joes Pizza", 10, 0, categories=["restaurant"]),
        listing(
            origin,
            Source.A,
            "1",
            "Joe's Pizza",
            categories=["cafe"],
            hours={"mon": "09:00-17:00"},
        ),
        listing(
            origin,
            Source.C,
            "3",
            "JOE'S PIZZA",
            20,
            0,
            hours={"mon": "09:00-21:00"},
        ),
        listing(origin, Source.A, "2", "Hair Salon", 5, 0, categories=["bank"]),
    ]
    merge_log = []
    businesses = dedup_businesses(listings, category_map, merge_log=merge_log)

    assert [b.id for b in businesses] == ["A:1", "A:2"]
    pizza = businesses[0]
    assert pizza.canonical_name == "Joe's Pizza"
    assert pizza.provenance == frozenset({("A", "1"), ("B", "7"), ("C", "3")})
    assert BusinessType.CAFE in pizza.types
    assert BusinessType.RESTAURANT in pizza.types
    # the longest schedule wins
    assert pizza.schedule.hours == pytest.approx(12.0)
    assert distance_m(pizza.where, offset_m(origin, 10, 0)) < 0.5
    assert len(merge_log) == 3


def test_dedup_respects_distance(origin, category_map):
    listings = [
        listing(origin, Source.A, "1", "Corner Cafe"),
        listing(origin, Source.B, "1", "Corner Cafe", 80, 0),
    ]
    assert len(dedup_businesses(listings, category_map)) == 2
    assert len(dedup_businesses(listings, category_map, distance_m=100)) == 1


def test_dedup_chains_transitively(origin, category_map):
    # a~b and b~c within 50 m, a and c 80 m apart
    listings = [
        listing(origin, Source.A, "1", "Corner Cafe"),
        listing(origin, Source.B, "1", "Corner Cafe", 40, 0),
        listing(origin, Source.C, "1", "Corner Cafe", 80, 0),
    ]
    (business,) = dedup_businesses(listings, category_map)
    assert len(business.provenance) == 3


def test_dedup_order_independent(origin, category_map):
    listings = [
        listing(origin, Source.A, str(i), f"Shop {i % 3}", 15 * i, 0)
        for i in range(9)
    ]
    forward = dedup_businesses(listings, category_map)
    backward = dedup_businesses(listings[::-1], category_map)
    assert [b.signature() for b in forward] == [b.signature() for b in backward]
    assert [b.id for b in forward] == [b.id for b in backward]


def test_dedup_empty(category_map):
    assert dedup_businesses([], category_map) == []


def test_dedup_is_idempotent(origin, category_map):
    listings = [
        listing(origin, Source.A, "1", "Night Owl", hours={"fri": "20:00-02:00"}),
        listing(origin, Source.B, "4", "Night Owl", 3, 3, categories=["bar"]),
    ]
    once = dedup_businesses(listings, category_map)
    again = dedup_businesses([business_to_listing(b) for b in once], category_map)
    assert [b.signature() for b in again] == [b.signature() for b in once]


def test_dedup_settles_when_centroid_moves(origin, category_map):
    # x1 and x2 merge; their centroid is then 45 m from y, which was 51 m
    # from each of them
    listings = [
        listing(origin, Source.A, "y", "Corner Cafe"),
        listing(origin, Source.B, "x1", "Corner Cafe", 45, 24),
        listing(origin, Source.C, "x2", "Corner Cafe", 45, -24),
    ]
    once = dedup_businesses(listings, category_map)
    again = dedup_businesses([business_to_listing(b) for b in once], category_map)

    assert len(once) == 1
    assert len(once[0].provenance) == 3
    assert [b.id for b in again] == [b.id for b in once]
    assert [b.signature() for b in again] == [b.signature() for b in once]


# fmt: off
NAME_WORDS = [
    "blue", "heron", "corner", "golden", "dragon", "lucky", "star", "market",
    "green", "leaf", "urban", "bean", "north", "south", "river", "oak",
    "maple", "city", "garden", "royal", "sun", "moon", "little", "big",
    "west", "east", "happy", "fresh", "silver", "iron", "stone", "bridge",
    "harbor", "lantern", "fox", "owl", "bear", "wolf", "rose", "lotus",
    "pearl", "crown", "ember", "cedar", "willow", "summit", "valley", "tiger",
    "panda", "falcon", "anchor", "compass", "velvet", "copper", "amber",
    "jade", "coral", "ivory", "olive", "saffron",
]
# fmt: on

NAME_VARIANTS = [
    str.upper,
    lambda s: s.replace(" ", "-"),
    lambda s: s.replace("e", "é"),
    lambda s: s.title() + " Inc",
]


@pytest.fixture(scope="module")
def planted_listings():
    """
    About 10k listings of 6000 businesses spread over 10 km by 10 km.

    Copies of a business have a jittered name and lie within 20 m of it.

    :return: The listings and, per (source, source_id), the planted business.
    """
    rng = np.random.default_rng(11)
    n_businesses = 6000
    sources = list(Source)

    listings = []
    truth = {}
    for k in range(n_businesses):
        words = rng.choice(len(NAME_WORDS), size=3, replace=False)
        name = " ".join(NAME_WORDS[w] for w in words).title()
        east, north = rng.uniform(0, 10_000, size=2)
        n_copies = 1 + rng.binomial(2, 0.35)

        for copy in range(n_copies):
            angle = rng.uniform(0, 2 * np.pi)
            radius = 20 * np.sqrt(rng.uniform())
            copy_name = (
                name
                if copy == 0
                else NAME_VARIANTS[rng.integers(len(NAME_VARIANTS))](name)
            )
            item = listing(
                ORIGIN,
                sources[copy % len(sources)],
                f"{k}-{copy}",
                copy_name,
                east + radius * np.cos(angle),
                north + radius * np.sin(angle),
                categories=["cafe"],
            )
            listings.append(item)
            truth[item.key] = k

    return listings, truth


def test_dedup_planted_recall_and_false_merges(planted_listings, category_map):
    listings, truth = planted_listings
    businesses = dedup_businesses(listings, category_map)

    merged_with = {}
    false_merges = 0
    for business in businesses:
        planted = {truth[key] for key in business.provenance}
        if len(planted) > 1:
            false_merges += 1
        for key in business.provenance:
            merged_with[key] = business.id

    by_planted = {}
    for key, k in truth.items():
        by_planted.setdefault(k, []).append(key)

    pairs = found = 0
    for keys in by_planted.values():
        for i, a in enumerate(keys):
            for b in keys[i + 1 :]:
                pairs += 1
                found += merged_with[a] == merged_with[b]

    assert len(listings) > 9000
    assert pairs > 2000
    assert found / pairs >= 0.99
    assert false_merges / len(businesses) <= 0.01
    assert abs(len(businesses) - len(by_planted)) / len(by_planted) <= 0.01


def test_dedup_planted_is_idempotent(planted_listings, category_map):
    listings, _ = planted_listings
    once = dedup_businesses(listings, category_map)
    again = dedup_businesses([business_to_listing(b) for b in once], category_map)

    assert len(again) == len(once)
    assert [b.id for b in again] == [b.id for b in once]
    assert [b.signature() for b in again] == [b.signature() for b in once]


def test_dedup_planted_order_and_provenance(planted_listings, category_map):
    listings, truth = planted_listings
    once = dedup_businesses(listings, category_map)
    order = np.random.default_rng(3).permutation(len(listings))
    shuffled = dedup_businesses([listings[i] for i in order], category_map)

    assert [b.signature() for b in shuffled] == [b.signature() for b in once]

    keys = [key for business in once for key in business.provenance]
    assert len(keys) == len(set(keys))
    assert set(keys) == set(truth)


def test_load_listings_skips_bad_lines(tmp_path, origin):
    rows = [
        {"source": "A", "source_id": "1", "name": "One", "lat": 39.95, "lon": -75.2},
        {"source": "A", "source_id": "1", "name": "Dup", "lat": 39.95, "lon": -75.2},
        {"source": "Z", "source_id": "2", "name": "Bad", "lat": 39.95, "lon": -75.2},
        {"source": "B", "source_id": "3", "name": "Far", "lat": 95.0, "lon": -75.2},
        {
            "source": "C",
            "source_id": "4",
            "name": "Two",
            "lat": 39.95,
            "lon": -75.2,
            "categories": ["cafe"],
            "hours": {"mon": "08:00-12:00"},
        },
    ]
    path = tmp_path / "listings.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n\n")

    listings, report = load_listings(str(path), max_skip_rate=1.0)
    assert [l.key for l in listings] == [("A", "1"), ("C", "4")]
    assert listings[1].raw_categories == ["cafe"]
    assert report.read == 5
    assert report.skipped == 3

    with pytest.raises(DataValidationError, match="3 of 5 records skipped"):
        load_listings(str(path), max_skip_rate=0.5)


def test_load_listings_missing_file(tmp_path):
    with pytest.raises(DataValidationError, match="not found"):
        load_listings(str(tmp_path / "missing.jsonl"))
