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
Business listings: loading, category mapping and multi-source deduplication.

Two listings are the same business when their normalised names have a
token-set Jaccard similarity of at least 0.7 and they lie within 50 m.
Merging follows the connected components of that relation, repeated over
the merged records until nothing more matches, so the result
does not depend on input order.
"""

import os
import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from pydantic import ValidationError
from unidecode import unidecode

from urbanvibe.classes.enums import BusinessType
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.classes.general import LoadReport
from urbanvibe.geometry.index import SpatialIndex
from urbanvibe.geometry.primitives import GeoPoint
from urbanvibe.ingest.classes import Business, RawListing
from urbanvibe.ingest.hours import parse_hours, schedule_to_hours_text
from urbanvibe.logs import ulogger
from urbanvibe.utils import URBANVIBE_DIR

DEFAULT_CATEGORY_MAP = f"{URBANVIBE_DIR}/files/category_map.csv"

CategoryMap = Dict[str, FrozenSet[BusinessType]]


def normalize_category(raw: str) -> str:
    return " ".join(str(raw).split()).casefold()


def load_category_map(path: str = None) -> CategoryMap:
    """
    Read a raw_category, business_type CSV. Many-to-many rows are allowed.

    Every business type name also maps to itself.

    :param path: The CSV. None reads the bundled map.

    :raises DataValidationError: On missing columns or unknown business types.
    """
    path = path or DEFAULT_CATEGORY_MAP
    if not os.path.exists(path):
        raise DataValidationError(f"category_map file not found: {path}")

    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = {"raw_category", "business_type"} - set(df.columns)
    if missing:
        raise DataValidationError(
            f"{path}: missing columns {', '.join(sorted(missing))}"
        )

    mapping: Dict[str, set] = {
        normalize_category(t.value): {t} for t in BusinessType
    }
    for i, row in enumerate(df.itertuples(index=False)):
        try:
            business_type = BusinessType.parse(row.business_type)
        except ValueError as e:
            raise DataValidationError(f"{path} line {i + 2}: {e}")
        key = normalize_category(row.raw_category)
        if not key:
            raise DataValidationError(f"{path} line {i + 2}: empty raw_category")
        mapping.setdefault(key, set()).add(business_type)

    return {key: frozenset(types) for key, types in mapping.items()}


def map_categories(
    raw_categories: Iterable[str], category_map: CategoryMap, label: str = None
) -> FrozenSet[BusinessType]:
    """
    Map raw source categories onto business types.

    Unmapped categories fall back to Institution, with a warning.

    :return: A non-empty set of business types.
    """
    types = set()
    unmapped = []
    for raw in raw_categories:
        key = normalize_category(raw)
        if key in category_map:
            types.update(category_map[key])
        else:
            unmapped.append(raw)

    if unmapped or not types:
        types.add(BusinessType.INSTITUTION)
        ulogger.warning(
            f"{label or 'listing'}: unmapped categories {unmapped or '[]'}, "
            "using Institution"
        )

    return frozenset(types)


def normalize_name(name: str) -> FrozenSet[str]:
    """
    Token set of a business name.

    Diacritics are folded, case is folded, apostrophes are dropped and
    any other punctuation separates tokens.
    """
    text = unidecode(str(name)).casefold()
    text = re.sub(r"['`]", "", text)
    text = re.sub(r"[^0-9a-z]+", " ", text)
    return frozenset(text.split())


def name_similarity(a: FrozenSet[str], b: FrozenSet[str]) -> float:
    """
    Jaccard similarity of two token sets. Empty names never match.
    """
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def _listing_label(listing: RawListing) -> str:
    return f"{listing.source.value}:{listing.source_id}"


def dedup_businesses(
    listings: List[RawListing],
    category_map: CategoryMap,
    similarity: float = 0.7,
    distance_m: float = 50.0,
    merge_log: Optional[List[dict]] = None,
) -> List[Business]:
    """
    Merge listings of the same business across sources.

    The merged business keeps the union of types, the schedule with the
    most open minutes (ties go to the smallest provenance key), the
    centroid of the member locations and the name of the smallest
    provenance key.

    Merging repeats over the merged records (canonical name, centroid)
    until no pair matches, so deduplicating the output again changes
    nothing.

    :param listings: Raw listings, (source, source_id) unique.
    :param category_map: Raw category to business types.
    :param similarity: Minimum name similarity to merge.
    :param distance_m: Maximum distance to merge.
    :param merge_log: If given, one entry per merged pair is appended.

    :return: Businesses sorted by id.
    """
    listings = sorted(listings, key=lambda l: l.key)
    if not listings:
        return []

    tokens = [normalize_name(l.name) for l in listings]
    lats = np.array([l.lat for l in listings], dtype=float)
    lons = np.array([l.lon for l in listings], dtype=float)

    # Each group is a sorted list of listing positions; its first member
    # carries the canonical name.
    groups = [[i] for i in range(len(listings))]
    n_round = 0
    while True:
        n_round += 1
        group_lats = [float(np.mean(lats[g])) for g in groups]
        group_lons = [float(np.mean(lons[g])) for g in groups]
        index = SpatialIndex(
            [GeoPoint(lon, lat) for lon, lat in zip(group_lons, group_lats)]
        )

        graph = nx.Graph()
        graph.add_nodes_from(range(len(groups)))
        neighbours = index.query_positions_many(group_lats, group_lons, distance_m)
        for i, near in enumerate(neighbours):
            head_i = groups[i][0]
            for j in near.tolist():
                if j <= i:
                    continue
                head_j = groups[j][0]
                if name_similarity(tokens[head_i], tokens[head_j]) < similarity:
                    continue
                graph.add_edge(i, j)
                a = _listing_label(listings[head_i])
                b = _listing_label(listings[head_j])
                ulogger.debug(f"Merging {a} with {b} ({listings[head_i].name!r})")
                if merge_log is not None:
                    merge_log.append(
                        {"a": a, "b": b, "name": listings[head_i].name}
                    )

        if graph.number_of_edges() == 0:
            break

        groups = sorted(
            sorted(i for g in component for i in groups[g])
            for component in nx.connected_components(graph)
        )

    ulogger.debug(f"Dedup settled after {n_round} rounds")

    businesses = [
        _merge([listings[i] for i in group], category_map) for group in groups
    ]
    businesses.sort(key=lambda b: b.id)
    return businesses


def _merge(members: List[RawListing], category_map: CategoryMap) -> Business:
    first = members[0]

    types = set()
    schedule = None
    for member in members:
        label = _listing_label(member)
        types.update(map_categories(member.raw_categories, category_map, label))
        candidate = parse_hours(member.hours_text, label)
        if candidate is not None and (
            schedule is None or candidate.total_minutes > schedule.total_minutes
        ):
            schedule = candidate

    lon = float(np.mean([m.lon for m in members]))
    lat = float(np.mean([m.lat for m in members]))

    return Business(
        id=_listing_label(first),
        where=GeoPoint(lon, lat),
        canonical_name=first.name,
        types=frozenset(types),
        schedule=schedule,
        provenance=frozenset(m.key for m in members),
    )


def business_to_listing(business: Business) -> RawListing:
    """
    Re-emit a business as a listing, keyed by its smallest provenance entry.
    """
    source, source_id = min(business.provenance)
    return RawListing(
        source=source,
        source_id=source_id,
        name=business.canonical_name,
        lat=business.where.lat,
        lon=business.where.lon,
        categories=sorted(t.value for t in business.types),
        hours=(
            schedule_to_hours_text(business.schedule)
            if business.schedule is not None
            else None
        ),
    )


def load_listings(path: str, max_skip_rate: float = 0.01) -> Tuple[
    List[RawListing], LoadReport
]:
    """
    Read a JSONL file of listings.

    Blank lines are ignored. Invalid lines and repeated (source, source_id)
    pairs are skipped and counted.

    :raises DataValidationError: If the file is missing or too many lines
                                 were skipped.
    """
    if not os.path.exists(path):
        raise DataValidationError(f"listings file not found: {path}")

    report = LoadReport(os.path.basename(path))
    listings = []
    seen = set()

    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            report.read += 1
            try:
                listing = RawListing.model_validate_json(line)
            except ValidationError as e:
                report.skip(f"invalid listing ({e.error_count()} errors)", line_no)
                continue
            if listing.key in seen:
                report.skip(f"duplicate listing {listing.key}", line_no)
                continue
            seen.add(listing.key)
            listings.append(listing)

    if not listings:
        ulogger.warning(f"{path}: no listings, business count will be 0")

    report.check_skip_rate(max_skip_rate)
    return listings, report
