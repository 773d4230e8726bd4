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
Assemble the seven datasets into a validated `DatasetBundle`.
"""

import os
import time
from datetime import date
from typing import Dict, List

from urbanvibe.classes.enums import Source
from urbanvibe.classes.general import LoadReport
from urbanvibe.ingest.businesses import (
    dedup_businesses,
    load_category_map,
    load_listings,
)
from urbanvibe.ingest.classes import DatasetBundle, RawListing
from urbanvibe.ingest.geounits import load_geounits
from urbanvibe.ingest.hours import parse_hours
from urbanvibe.ingest.records import load_crimes, load_lots, load_properties
from urbanvibe.logs import log_timings, ulogger
from urbanvibe.settings.config import Config
from urbanvibe.utils import require_file

# Ingest date when none is configured and no record carries a date.
FALLBACK_INGEST_DATE = date(1970, 1, 1)


def count_listings(listings: List[RawListing]) -> Dict[str, Dict[str, int]]:
    """
    Per source, the number of listings and of listings with usable hours.
    """
    counts = {s.value: {"total": 0, "with_hours": 0} for s in Source}
    for listing in listings:
        entry = counts[listing.source.value]
        entry["total"] += 1
        label = f"{listing.source.value}:{listing.source_id}"
        if parse_hours(listing.hours_text, label):
            entry["with_hours"] += 1
    return counts


def build_bundle(config: Config) -> DatasetBundle:
    """
    Load, validate and deduplicate every input dataset of a config.

    :param config: The run config.

    :return: The bundle, with the ingest report attached.

    :raises DataValidationError: If a file is missing or fails validation.
    """
    paths = config.paths
    ingest = config.ingest
    timings = {}

    for name, path in paths.inputs().items():
        if name != "category_map":
            require_file(path, name)

    start = time.time()
    unit_report = LoadReport(os.path.basename(paths.geounits))
    units = load_geounits(
        paths.geounits,
        paths.population,
        paths.acs,
        min_block_population=ingest.min_block_population,
        min_block_group_population=ingest.min_block_group_population,
        prefer_area_attribute=config.metrics.prefer_area_attribute,
        bracket_tolerance=ingest.bracket_tolerance,
        report=unit_report,
    )
    timings["geounits"] = time.time() - start

    start = time.time()
    lots, lot_report = load_lots(
        paths.lots,
        prefer_area_attribute=config.metrics.prefer_area_attribute,
        max_skip_rate=ingest.max_skip_rate,
    )
    crimes, crime_report = load_crimes(
        paths.crimes, timezone=ingest.timezone, max_skip_rate=ingest.max_skip_rate
    )
    timings["lots+crimes"] = time.time() - start

    ingest_date = (
        date.fromisoformat(str(ingest.ingest_date)) if ingest.ingest_date else None
    )
    start = time.time()
    properties, property_report = load_properties(
        paths.properties, ingest_date=ingest_date, max_skip_rate=ingest.max_skip_rate
    )
    if ingest_date is None:
        dates = [p.last_sale_date for p in properties] or [
            c.when.date() for c in crimes
        ]
        ingest_date = max(dates, default=FALLBACK_INGEST_DATE)
        ulogger.info(f"No ingest date configured, using latest record {ingest_date}")
    timings["properties"] = time.time() - start

    start = time.time()
    category_map = load_category_map(paths.category_map)
    listings, listing_report = load_listings(paths.listings, ingest.max_skip_rate)
    merge_log = []
    businesses = dedup_businesses(
        listings,
        category_map,
        similarity=ingest.dedup_name_similarity,
        distance_m=ingest.dedup_distance_m,
        merge_log=merge_log,
    )
    timings["businesses"] = time.time() - start

    listing_counts = count_listings(listings)
    listing_counts["union"] = {
        "total": len(businesses),
        "with_hours": sum(b.has_hours for b in businesses),
    }

    report = {
        "counts": {
            "units": len(units),
            "units_included": sum(u.included for u in units),
            "lots": len(lots),
            "crimes": len(crimes),
            "properties": len(properties),
            "listings": len(listings),
            "businesses": len(businesses),
        },
        "files": {
            "geounits": unit_report.to_dict(),
            "lots": lot_report.to_dict(),
            "crimes": crime_report.to_dict(),
            "properties": property_report.to_dict(),
            "listings": listing_report.to_dict(),
        },
        "listing_counts": listing_counts,
        "dedup_log": merge_log,
        "ingest_date": ingest_date.isoformat(),
        "timezone": ingest.timezone,
    }

    log_timings(timings, title="Ingest timings:")
    ulogger.info(
        f"Deduplicated {len(listings)} listings into {len(businesses)} businesses "
        f"({len(merge_log)} merges)"
    )

    return DatasetBundle(
        units=units,
        lots=lots,
        crimes=crimes,
        properties=properties,
        businesses=businesses,
        listing_counts=listing_counts,
        ingest_date=ingest_date,
        timezone=ingest.timezone,
        report=report,
    )
