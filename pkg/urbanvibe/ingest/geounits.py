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
Census geography loading: unit polygons joined with population and ACS
economic data, plus the population filter.
"""

import json
import os
from typing import Dict, List, Optional

import pandas as pd

from urbanvibe.classes.enums import UnitLevel
from urbanvibe.classes.errors import (
    DataValidationError,
    GeometryError,
    IdMismatchError,
)
from urbanvibe.classes.general import LoadReport
from urbanvibe.geometry.assign import UNASSIGNED, assign_points_to_units
from urbanvibe.geometry.primitives import GeoPolygon, planar_area_m2
from urbanvibe.ingest.classes import GeoUnit, N_BRACKETS, check_brackets
from urbanvibe.logs import ulogger
from urbanvibe.utils import require_file

BRACKET_COLUMNS = [f"b{i}" for i in range(1, N_BRACKETS + 1)]


def read_features(path: str) -> List[dict]:
    """
    Features of a GeoJSON FeatureCollection.

    :raises DataValidationError: If the file is not a FeatureCollection.
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DataValidationError(f"{path}: invalid JSON ({e})")

    if data.get("type") != "FeatureCollection":
        raise DataValidationError(f"{path}: expected a GeoJSON FeatureCollection")
    return data.get("features") or []


def polygons_from_geometry(geometry: dict, label: str) -> List[GeoPolygon]:
    """
    Polygons of a GeoJSON Polygon or MultiPolygon geometry.

    :raises GeometryError: On other geometry types or invalid rings.
    """
    kind = (geometry or {}).get("type")
    coords = (geometry or {}).get("coordinates")

    if kind == "Polygon":
        parts = [coords]
    elif kind == "MultiPolygon":
        parts = coords
    else:
        raise GeometryError(f"{label}: unsupported geometry type {kind!r}")

    polygons = []
    for part in parts or []:
        if not part:
            raise GeometryError(f"{label}: empty polygon")
        try:
            polygons.append(GeoPolygon(part[0], part[1:]))
        except GeometryError as e:
            raise GeometryError(f"{label}: {e}")
    if not polygons:
        raise GeometryError(f"{label}: no polygons")
    return polygons


def _read_csv(path: str, name: str) -> pd.DataFrame:
    require_file(path, name)
    try:
        return pd.read_csv(path, dtype={"id": str})
    except pd.errors.EmptyDataError:
        return pd.DataFrame()


def _units_from_features(
    features: List[dict], prefer_area_attribute: bool
) -> List[GeoUnit]:
    units = []
    seen = set()
    for n, feature in enumerate(features, start=1):
        props = feature.get("properties") or {}
        label = f"feature {n}"

        unit_id = props.get("id")
        if unit_id is None or str(unit_id) == "":
            raise DataValidationError(f"{label}: missing id")
        unit_id = str(unit_id)
        if unit_id in seen:
            raise DataValidationError(f"{label}: duplicate unit id {unit_id}")
        seen.add(unit_id)

        try:
            level = UnitLevel(props.get("level"))
        except ValueError:
            raise DataValidationError(f"{label}: invalid level {props.get('level')!r}")

        polygons = polygons_from_geometry(
            feature.get("geometry"), f"{label} ({unit_id})"
        )

        area = props.get("area_m2")
        if not (prefer_area_attribute and area is not None):
            area = sum(planar_area_m2(p) for p in polygons)
        if not float(area) > 0:
            raise GeometryError(f"{label} ({unit_id}): area must be positive")

        units.append(GeoUnit(unit_id, level, polygons, float(area)))
    return units


def _assign_parents(units: List[GeoUnit]):
    blocks = [u for u in units if u.level == UnitLevel.BLOCK]
    groups = [u for u in units if u.level == UnitLevel.BLOCK_GROUP]
    if not blocks or not groups:
        return

    parents = assign_points_to_units([b.polygon.centroid for b in blocks], groups)
    for block, parent in zip(blocks, parents):
        block.parent_id = None if parent == UNASSIGNED else parent


def _join_population(units: List[GeoUnit], population: pd.DataFrame, path: str):
    by_id = {u.id: u for u in units}

    if population.empty:
        ulogger.warning(
            f"{path}: population file is empty, all units flagged as excluded"
        )
        return

    if not {"id", "population"} <= set(population.columns):
        raise DataValidationError(f"{path}: expected columns id, population")

    unknown = set()
    for i, row in enumerate(population.itertuples(index=False)):
        line = i + 2
        if row.id not in by_id:
            unknown.add(str(row.id))
            continue
        try:
            value = float(row.population)
        except (TypeError, ValueError):
            raise DataValidationError(f"{path} line {line}: invalid population")
        if pd.isna(value) or value < 0 or value != int(value):
            raise DataValidationError(
                f"{path} line {line}: population must be a non-negative integer"
            )
        by_id[row.id].population = int(value)

    if unknown:
        raise IdMismatchError(f"{path}: population ids with no unit", unknown)

    # Block groups without a row take the sum of their blocks.
    block_sums: Dict[str, int] = {}
    for unit in units:
        if unit.level == UnitLevel.BLOCK and unit.population is not None:
            if unit.parent_id is not None:
                block_sums[unit.parent_id] = (
                    block_sums.get(unit.parent_id, 0) + unit.population
                )

    missing = set()
    for unit in units:
        if unit.population is not None:
            continue
        if unit.level == UnitLevel.BLOCK_GROUP and unit.id in block_sums:
            unit.population = block_sums[unit.id]
        else:
            missing.add(unit.id)

    if missing:
        raise IdMismatchError(f"{path}: units with no population row", missing)


def _join_acs(
    units: List[GeoUnit], acs: pd.DataFrame, path: str, bracket_tolerance: float
):
    groups = {u.id: u for u in units if u.level == UnitLevel.BLOCK_GROUP}

    if acs.empty:
        if groups:
            ulogger.warning(f"{path}: ACS file is empty, no income or poverty data")
        return

    needed = {"id", "per_capita_income", *BRACKET_COLUMNS}
    if not needed <= set(acs.columns):
        raise DataValidationError(
            f"{path}: missing columns {', '.join(sorted(needed - set(acs.columns)))}"
        )

    unknown = set()
    for i, row in enumerate(acs.itertuples(index=False)):
        line = i + 2
        if row.id not in groups:
            unknown.add(str(row.id))
            continue
        try:
            income = float(row.per_capita_income)
            brackets = [float(getattr(row, c)) for c in BRACKET_COLUMNS]
        except (TypeError, ValueError):
            raise DataValidationError(f"{path} line {line}: non-numeric value")
        if pd.isna(income) or any(pd.isna(b) for b in brackets):
            raise DataValidationError(f"{path} line {line}: missing value")
        check_brackets(brackets, bracket_tolerance, label=f"{path} line {line}")

        unit = groups[row.id]
        unit.per_capita_income = income
        unit.poverty_brackets = tuple(brackets)

    if unknown:
        raise IdMismatchError(f"{path}: ACS ids with no block group", unknown)

    lacking = sorted(u.id for u in groups.values() if u.poverty_brackets is None)
    if lacking:
        ulogger.warning(
            f"{path}: {len(lacking)} block groups have no ACS row "
            f"(first: {lacking[0]}); income and poverty left empty"
        )


def load_geounits(
    geojson: str,
    population_csv: str,
    acs_csv: str,
    min_block_population: int = 25,
    min_block_group_population: int = 400,
    prefer_area_attribute: bool = True,
    bracket_tolerance: float = 1e-6,
    report: Optional[LoadReport] = None,
) -> List[GeoUnit]:
    """
    Load blocks and block groups and join population and ACS data.

    Units below the population thresholds are flagged (`included` is
    False), never dropped.

    :param geojson: FeatureCollection with properties {id, level, area_m2?}.
    :param population_csv: id, population.
    :param acs_csv: id, per_capita_income, b1..b7.
    :param min_block_population: Block population filter.
    :param min_block_group_population: Block group population filter.
    :param prefer_area_attribute: Use area_m2 when present.
    :param bracket_tolerance: Allowed deviation of bracket sums from 1.
    :param report: Filled with counts if given.

    :raises IdMismatchError: If ids fail to join across files.
    :raises DataValidationError: On malformed rows, with their line number.
    """
    require_file(geojson, "geounits")
    units = _units_from_features(read_features(geojson), prefer_area_attribute)
    _assign_parents(units)

    population = _read_csv(population_csv, "population")
    _join_population(units, population, population_csv)

    acs = _read_csv(acs_csv, "acs")
    _join_acs(units, acs, acs_csv, bracket_tolerance)

    thresholds = {
        UnitLevel.BLOCK: min_block_population,
        UnitLevel.BLOCK_GROUP: min_block_group_population,
    }
    for unit in units:
        unit.included = (
            unit.population is not None and unit.population >= thresholds[unit.level]
        )

    if report is not None:
        report.read = len(units)
        excluded = sum(not u.included for u in units)
        if excluded:
            report.append(f"{excluded} units below the population filter")

    ulogger.info(
        f"Loaded {len(units)} units from {os.path.basename(geojson)}, "
        f"{sum(u.included for u in units)} pass the population filter"
    )
    return units


def population_filter_summary(units: List[GeoUnit]) -> List[dict]:
    """
    Per level: units, units passing the filter and share of population kept.
    """
    rows = []
    for level in UnitLevel:
        at_level = [u for u in units if u.level == level]
        total = sum(u.population or 0 for u in at_level)
        kept = sum(u.population or 0 for u in at_level if u.included)
        rows.append(
            {
                "level": level.value,
                "units": len(at_level),
                "units_included": sum(u.included for u in at_level),
                "population": total,
                "population_included": kept,
                "share_included": kept / total if total else float("nan"),
            }
        )
    return rows
