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
Loaders for the point and lot datasets: crimes, land lots and property sales.

Bad records are skipped and counted in a `LoadReport`; a file fails as a
whole once more than `max_skip_rate` of its records were skipped.
"""

import os
import re
from datetime import date, datetime
from typing import List, Optional, Tuple
from zoneinfo import ZoneInfo

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import CrimeCategory, Zoning
from urbanvibe.classes.errors import DataValidationError, GeometryError
from urbanvibe.classes.general import LoadReport
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.geometry.primitives import GeoPoint, planar_area_m2
from urbanvibe.ingest.classes import CrimeEvent, LandLot, PropertyRecord
from urbanvibe.ingest.geounits import polygons_from_geometry, read_features
from urbanvibe.logs import ulogger
from urbanvibe.utils import require_file

CRIME_COLUMNS = ["id", "datetime", "lat", "lon", "category"]
PROPERTY_COLUMNS = ["id", "lat", "lon", "residential", "last_sale_date"]

# Municipal land use names onto the merged designations.
ZONING_ALIASES = {
    "commercial": Zoning.COMMERCIAL,
    "commercial business": Zoning.COMMERCIAL,
    "commercial consumer": Zoning.COMMERCIAL,
    "residential": Zoning.RESIDENTIAL,
    "residential low density": Zoning.RESIDENTIAL,
    "residential medium density": Zoning.RESIDENTIAL,
    "residential high density": Zoning.RESIDENTIAL,
    "mixed use": Zoning.MIXED_USE,
    "commercial residential mixed": Zoning.MIXED_USE,
    "commercial residential mixed use": Zoning.MIXED_USE,
    "industrial": Zoning.INDUSTRIAL,
    "vacant": Zoning.VACANT,
    "vacant land": Zoning.VACANT,
    "transportation": Zoning.TRANSPORTATION,
    "water": Zoning.WATER,
    "park": Zoning.PARK,
    "park open space": Zoning.PARK,
    "parks": Zoning.PARK,
    "civic": Zoning.CIVIC,
    "civic institution": Zoning.CIVIC,
    "recreation": Zoning.RECREATION,
    "culture": Zoning.CULTURE,
    "culture amusement": Zoning.CULTURE,
    "cemetery": Zoning.CEMETERY,
}


def normalize_zoning(raw: str) -> Zoning:
    """
    Map a zoning name onto its merged designation.

    Case, punctuation and underscores are ignored.

    :raises ValueError: If the name is unknown.
    """
    key = " ".join(re.sub(r"[^0-9a-z]+", " ", str(raw).casefold()).split())
    if key not in ZONING_ALIASES:
        raise ValueError(f"unknown zoning {raw!r}")
    return ZONING_ALIASES[key]


def _read_table(path: str, name: str, columns: List[str]) -> pd.DataFrame:
    require_file(path, name)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise DataValidationError(f"{path}: header required ({', '.join(columns)})")

    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise DataValidationError(f"{path}: missing columns {', '.join(missing)}")
    return df


def _point(lat: str, lon: str) -> GeoPoint:
    """
    :raises ValueError: On non-numeric or out of range coordinates.
    """
    lat, lon = float(lat), float(lon)
    if not (np.isfinite(lat) and np.isfinite(lon)):
        raise ValueError("non-finite coordinate")
    return GeoPoint(lon, lat)


def parse_local_timestamp(text: str, zone: ZoneInfo) -> datetime:
    """
    Parse an ISO-8601 timestamp into the local timezone.

    Naive timestamps are taken as local wall time; aware ones are converted.

    :raises ValueError: If the text is not ISO-8601.
    """
    when = datetime.fromisoformat(str(text).strip().replace("Z", "+00:00"))
    if when.tzinfo is None:
        return when.replace(tzinfo=zone)
    return when.astimezone(zone)


def load_crimes(
    path: str, timezone: str = "America/New_York", max_skip_rate: float = 0.01
) -> Tuple[List[CrimeEvent], LoadReport]:
    """
    Read crimes.csv (id, datetime, lat, lon, category).

    :param path: The CSV, header required.
    :param timezone: IANA zone the timestamps are read in.
    :param max_skip_rate: Largest fraction of rows that may be skipped.

    :raises DataValidationError: On a missing file or header, or too many skips.
    """
    df = _read_table(path, "crimes", CRIME_COLUMNS)
    zone = ZoneInfo(timezone)
    report = LoadReport(os.path.basename(path))

    crimes = []
    seen = set()
    for i, row in enumerate(df.itertuples(index=False)):
        line = i + 2
        report.read += 1
        try:
            where = _point(row.lat, row.lon)
        except (ValueError, DataValidationError) as e:
            report.skip(f"bad coordinate ({e})", line)
            continue
        try:
            when = parse_local_timestamp(row.datetime, zone)
        except ValueError:
            report.skip(f"bad datetime {row.datetime!r}", line)
            continue
        try:
            category = CrimeCategory.parse(row.category)
        except ValueError as e:
            report.skip(str(e), line)
            continue
        if not row.id or row.id in seen:
            report.skip(f"missing or repeated id {row.id!r}", line)
            continue
        seen.add(row.id)
        crimes.append(CrimeEvent(row.id, when, where, category))

    report.check_skip_rate(max_skip_rate)
    ulogger.info(f"Loaded {len(crimes)} crimes ({report.skipped} skipped)")
    return crimes, report


def _lot_location(polygons) -> GeoPoint:
    if len(polygons) == 1:
        return polygons[0].centroid

    areas = np.array([planar_area_m2(p) for p in polygons])
    centroids = [p.centroid for p in polygons]
    if not areas.sum() > 0:
        return centroids[0]
    lon = float(np.dot(areas, [c.lon for c in centroids]) / areas.sum())
    lat = float(np.dot(areas, [c.lat for c in centroids]) / areas.sum())
    return GeoPoint(lon, lat)


def load_lots(
    path: str, prefer_area_attribute: bool = True, max_skip_rate: float = 0.01
) -> Tuple[List[LandLot], LoadReport]:
    """
    Read the land lot GeoJSON (properties {id, zoning, area_m2?}).

    Lots are located by their centroid. Zoning names are merged onto the
    twelve designations; lots with unknown zoning are rejected with their
    feature number.

    :raises DataValidationError: On a malformed file or too many rejected lots.
    """
    require_file(path, "lots")
    features = read_features(path)
    report = LoadReport(os.path.basename(path))

    lots = []
    seen = set()
    for n, feature in enumerate(features, start=1):
        report.read += 1
        props = feature.get("properties") or {}
        lot_id = str(props.get("id", ""))

        if not lot_id or lot_id in seen:
            report.skip(f"missing or repeated id {lot_id!r}", n)
            continue
        try:
            zoning = normalize_zoning(props.get("zoning"))
        except ValueError as e:
            report.skip(str(e), n)
            continue
        try:
            polygons = polygons_from_geometry(feature.get("geometry"), f"lot {lot_id}")
        except GeometryError as e:
            report.skip(str(e), n)
            continue

        area = props.get("area_m2")
        if not (prefer_area_attribute and area is not None):
            area = sum(planar_area_m2(p) for p in polygons)
        try:
            area = float(area)
        except (TypeError, ValueError):
            report.skip(f"bad area {area!r}", n)
            continue
        if not area > 0:
            report.skip("non-positive area", n)
            continue

        seen.add(lot_id)
        lots.append(LandLot(lot_id, _lot_location(polygons), area, zoning))

    report.check_skip_rate(max_skip_rate)
    ulogger.info(f"Loaded {len(lots)} lots ({report.skipped} skipped)")
    return lots, report


def _parse_flag(text: str) -> bool:
    key = str(text).strip().casefold()
    if key in ("1", "true", "yes"):
        return True
    if key in ("0", "false", "no"):
        return False
    raise ValueError(f"bad residential flag {text!r}")


def load_properties(
    path: str, ingest_date: Optional[date] = None, max_skip_rate: float = 0.01
) -> Tuple[List[PropertyRecord], LoadReport]:
    """
    Read properties.csv (id, lat, lon, residential, last_sale_date).

    :param ingest_date: Sales after this date are skipped. None keeps all.

    :raises DataValidationError: On a missing file or header, or too many skips.
    """
    df = _read_table(path, "properties", PROPERTY_COLUMNS)
    report = LoadReport(os.path.basename(path))

    records = []
    seen = set()
    for i, row in enumerate(df.itertuples(index=False)):
        line = i + 2
        report.read += 1
        try:
            where = _point(row.lat, row.lon)
        except (ValueError, DataValidationError) as e:
            report.skip(f"bad coordinate ({e})", line)
            continue
        try:
            sold = date.fromisoformat(str(row.last_sale_date).strip())
        except ValueError:
            report.skip(f"bad date {row.last_sale_date!r}", line)
            continue
        if ingest_date is not None and sold > ingest_date:
            report.skip(f"sale date {sold} after ingest date {ingest_date}", line)
            continue
        try:
            residential = _parse_flag(row.residential)
        except ValueError as e:
            report.skip(str(e), line)
            continue
        if not row.id or row.id in seen:
            report.skip(f"missing or repeated id {row.id!r}", line)
            continue
        seen.add(row.id)
        records.append(PropertyRecord(row.id, where, residential, sold))

    report.check_skip_rate(max_skip_rate)
    ulogger.info(f"Loaded {len(records)} properties ({report.skipped} skipped)")
    return records, report


def crime_in_window(event: CrimeEvent, window: Optional[TimeWindow]) -> bool:
    """
    Whether a crime's local minute of the week falls inside a window.

    No window means the whole week.
    """
    if window is None or window.is_whole_week:
        return True
    return window.contains(event.minute_of_week)
