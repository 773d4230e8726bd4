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
Write a synthetic city in the ingest file formats.

All randomness comes from one PCG64 generator seeded by the spec, drawn in
a fixed order, so the same spec always produces byte-identical files.
Coordinates are laid out in meters east and north of the spec origin and
converted with the equirectangular projection.
"""

import json
import os
import shutil
from datetime import date, timedelta
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import BusinessType, UnitLevel, Zoning
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.classes.schedule import DAY_KEYS
from urbanvibe.geometry.primitives import unproject_m
from urbanvibe.ingest.businesses import DEFAULT_CATEGORY_MAP
from urbanvibe.logs import ulogger
from urbanvibe.metrics.economic import DEFAULT_POVERTY_WEIGHTS
from urbanvibe.settings.enums import Outputs
from urbanvibe.synth.classes import SynthSpec
from urbanvibe.utils import write_csv

BLOCKS_PER_SIDE = 2

VIOLENT_MIX = {"Homicide": 0.02, "Sexual": 0.08, "Robbery": 0.3, "Assault": 0.6}
NONVIOLENT_MIX = {
    "Burglary": 0.15,
    "Theft": 0.45,
    "Motor Theft": 0.1,
    "Arson": 0.02,
    "Vandalism": 0.18,
    "Disorderly Conduct": 0.1,
}
HOTSPOT_VIOLENT_SHARE = 0.3

# Relative crime frequency of each hour of the day.
HOUR_WEIGHTS = np.array(
    [4, 4, 3, 3, 2, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 4, 5, 5, 5, 5, 4, 4],
    dtype=float,
)

# Municipal names each merged designation is written as.
RAW_ZONING = {
    Zoning.COMMERCIAL: ["commercial consumer", "commercial business"],
    Zoning.RESIDENTIAL: [
        "residential low density",
        "residential medium density",
        "residential high density",
    ],
    Zoning.MIXED_USE: ["commercial residential mixed"],
    Zoning.INDUSTRIAL: ["industrial"],
    Zoning.VACANT: ["vacant", "vacant land"],
    Zoning.TRANSPORTATION: ["transportation"],
    Zoning.WATER: ["water"],
    Zoning.PARK: ["park open space"],
    Zoning.CIVIC: ["civic institution"],
    Zoning.RECREATION: ["recreation"],
    Zoning.CULTURE: ["culture amusement"],
    Zoning.CEMETERY: ["cemetery"],
}

RAW_CATEGORIES = {
    BusinessType.CAFE: ["cafe", "bakery", "coffee_shop"],
    BusinessType.CONVENIENCE: ["convenience_store", "supermarket"],
    BusinessType.GYM: ["gym", "fitness_center"],
    BusinessType.INSTITUTION: ["bank", "post_office", "church", "school"],
    BusinessType.LIQUOR: ["liquor_store"],
    BusinessType.LODGING: ["lodging", "hotel"],
    BusinessType.NIGHTLIFE: ["bar", "night_club"],
    BusinessType.PHARMACY: ["pharmacy"],
    BusinessType.RESTAURANT: ["restaurant", "meal_takeaway", "meal_delivery"],
    BusinessType.RETAIL: ["store", "clothing_store"],
}

# (opening hour, open hours per day)
TYPICAL_HOURS = {
    BusinessType.CAFE: (7, 10),
    BusinessType.CONVENIENCE: (7, 14),
    BusinessType.GYM: (6, 14),
    BusinessType.INSTITUTION: (9, 8),
    BusinessType.LIQUOR: (10, 11),
    BusinessType.LODGING: (0, 24),
    BusinessType.NIGHTLIFE: (18, 8),
    BusinessType.PHARMACY: (8, 12),
    BusinessType.RESTAURANT: (11, 11),
    BusinessType.RETAIL: (10, 9),
}
GYM_SHORT_HOURS = 4
GYM_LONG_HOURS = 16
GYM_HOURS_SPREAD = 4

NAME_WORDS = [
    "Rosa",
    "Liberty",
    "Market",
    "Schuylkill",
    "Penn",
    "Olde",
    "Corner",
    "Union",
    "Fairmount",
    "Bella",
    "Keystone",
    "Spruce",
    "Walnut",
    "Chestnut",
    "Pine",
]
TYPE_WORDS = {
    BusinessType.CAFE: "Cafe",
    BusinessType.CONVENIENCE: "Mart",
    BusinessType.GYM: "Fitness",
    BusinessType.INSTITUTION: "Trust",
    BusinessType.LIQUOR: "Spirits",
    BusinessType.LODGING: "Inn",
    BusinessType.NIGHTLIFE: "Tavern",
    BusinessType.PHARMACY: "Pharmacy",
    BusinessType.RESTAURANT: "Kitchen",
    BusinessType.RETAIL: "Goods",
}

SOURCES = ["A", "B", "C"]
SALES_START = date(1980, 1, 1)
LISTING_JITTER_M = 8.0
MIN_INCOME = 5000.0
MAX_INCOME = 250000.0


class _City:
    """
    Coordinates in local meters plus the conversion to lon/lat.
    """

    def __init__(self, spec: SynthSpec):
        self.origin = (spec.origin_lon, spec.origin_lat)

    def lonlat(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        return unproject_m(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float), self.origin
        )

    def square(self, x0: float, y0: float, edge: float) -> List[List[float]]:
        xs = np.array([x0, x0 + edge, x0 + edge, x0, x0])
        ys = np.array([y0, y0, y0 + edge, y0 + edge, y0])
        lon, lat = self.lonlat(xs, ys)
        return [[float(a), float(b)] for a, b in zip(lon, lat)]


def _bg_id(row: int, col: int) -> str:
    return f"421010{row:03d}{col:03d}"


def _block_id(bg_id: str, k: int) -> str:
    return f"{bg_id}{k + 1:03d}"


def _choice(rng: np.random.Generator, mix: Dict, size: int = None):
    keys = list(mix)
    p = np.array([mix[k] for k in keys], dtype=float)
    p = p / p.sum()
    picks = rng.choice(len(keys), size=size, p=p)
    if size is None:
        return keys[int(picks)]
    return [keys[int(i)] for i in picks]


def _feature(geometry_ring: List[List[float]], properties: dict) -> dict:
    return {
        "type": "Feature",
        "properties": properties,
        "geometry": {"type": "Polygon", "coordinates": [geometry_ring]},
    }


def _write_geojson(path: str, features: List[dict]):
    with open(path, "w") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f)


def _brackets(rng: np.random.Generator, income: float, spec: SynthSpec) -> np.ndarray:
    z = (income - spec.income_mean) / max(spec.income_sd, 1.0)
    poorness = float(np.clip(0.5 - 0.25 * z, 0.05, 0.95))
    poor = np.linspace(1, 0, 7) + 0.05
    rich = poor[::-1]
    expected = poorness * poor / poor.sum() + (1 - poorness) * rich / rich.sum()
    brackets = rng.dirichlet(expected * 60)
    return brackets / brackets.sum()


def _in_band(x: float, y: float, width: float, margin: float) -> bool:
    """
    Whether (x, y) lies within `margin` of the [0, width) square but outside it.
    """
    inside = 0 <= x < width and 0 <= y < width
    near = -margin <= x < width + margin and -margin <= y < width + margin
    return near and not inside


def _band_points(
    rng: np.random.Generator, n: int, width: float, margin: float
) -> np.ndarray:
    """
    n uniform points in the band of `margin` around the [0, width) square.
    """
    out = np.empty((0, 2))
    while len(out) < n:
        xy = rng.uniform(-margin, width + margin, size=(2 * n, 2))
        inside = np.all((xy >= 0) & (xy < width), axis=1)
        out = np.vstack([out, xy[~inside]])
    return out[:n]


def _nearest_hotspot_m(x: float, y: float, hotspots: np.ndarray) -> float:
    if len(hotspots) == 0:
        return np.inf
    return float(np.min(np.hypot(hotspots[:, 0] - x, hotspots[:, 1] - y)))


def _zoning(rng, spec: SynthSpec, near: bool) -> Zoning:
    mix = {Zoning(k): v for k, v in spec.zoning_mix.items()}
    if spec.vacancy_rule != "none" and Zoning.VACANT in mix:
        vacant_here = near if spec.vacancy_rule == "near" else not near
        mix[Zoning.VACANT] = mix[Zoning.VACANT] * 2 if vacant_here else 0.0
    return _choice(rng, mix)


def _hours_text(open_hour: int, hours_per_day: int, closed_sunday: bool) -> dict:
    if hours_per_day >= 24:
        daily = "00:00-24:00"
    else:
        end = (open_hour + hours_per_day) % 24
        daily = f"{open_hour:02d}:00-{end:02d}:00"
    return {
        day: ["closed"] if (closed_sunday and day == "sun") else [daily]
        for day in DAY_KEYS
    }


def _name_variant(rng, name: str) -> str:
    variant = int(rng.integers(3))
    if variant == 0:
        return name.upper()
    if variant == 1:
        return name.replace(" ", ", ", 1)
    return name.replace("e", "é")


def generate(spec: SynthSpec, out_dir: str) -> dict:
    """
    Generate a city and write it to a directory.

    Writes geounits.geojson, population.csv, acs.csv, lots.geojson,
    crimes.csv, properties.csv, listings.jsonl, category_map.csv and the
    ground_truth.json sidecar.

    :param spec: The city spec.
    :param out_dir: Target directory, created if missing.

    :return: The ground truth that was written.

    :raises DataValidationError: If the spec names unknown zonings or types.
    """
    try:
        zoning_mix = {Zoning(k): v for k, v in spec.zoning_mix.items()}
        type_mix = {BusinessType.parse(k): v for k, v in spec.type_mix.items()}
    except ValueError as e:
        raise DataValidationError(f"Invalid synth spec: {e}")
    if not zoning_mix or not type_mix:
        raise DataValidationError("Synth spec needs a zoning and a type mix")

    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    city = _City(spec)
    E = spec.unit_edge_m
    half = E / BLOCKS_PER_SIDE

    unit_features, population_rows, acs_rows = [], [], []
    block_groups = []

    # units, population and economics
    for row in range(spec.grid_size):
        for col in range(spec.grid_size):
            bg = _bg_id(row, col)
            x0, y0 = col * E, row * E

            draw = rng.normal(spec.population_base, spec.population_noise)
            population = int(max(0, round(draw)))
            block_pops = rng.multinomial(population, [0.25] * 4)
            draw = rng.normal(spec.income_mean, spec.income_sd)
            income = float(np.clip(draw, MIN_INCOME, MAX_INCOME))
            brackets = _brackets(rng, income, spec)

            unit_features.append(
                _feature(
                    city.square(x0, y0, E),
                    {
                        "id": bg,
                        "level": UnitLevel.BLOCK_GROUP.value,
                        "area_m2": E * E,
                    },
                )
            )
            population_rows.append({"id": bg, "population": population})
            acs_rows.append(
                {
                    "id": bg,
                    "per_capita_income": round(income, 2),
                    **{f"b{q + 1}": float(brackets[q]) for q in range(7)},
                }
            )

            blocks = []
            for k in range(BLOCKS_PER_SIDE**2):
                bx0 = x0 + (k % BLOCKS_PER_SIDE) * half
                by0 = y0 + (k // BLOCKS_PER_SIDE) * half
                block = _block_id(bg, k)
                unit_features.append(
                    _feature(
                        city.square(bx0, by0, half),
                        {
                            "id": block,
                            "level": UnitLevel.BLOCK.value,
                            "area_m2": half * half,
                        },
                    )
                )
                population_rows.append(
                    {"id": block, "population": int(block_pops[k])}
                )
                blocks.append((block, bx0, by0))

            block_groups.append(
                {
                    "id": bg,
                    "x0": x0,
                    "y0": y0,
                    "population": population,
                    "income": income,
                    "poverty": float(np.dot(DEFAULT_POVERTY_WEIGHTS, brackets)),
                    "blocks": blocks,
                }
            )

    # hotspots
    hotspots = []
    margin = min(spec.hotspot_margin_m, half / 2)
    for bg in block_groups:
        if rng.random() >= spec.hotspot_fraction:
            continue
        block, bx0, by0 = bg["blocks"][int(rng.integers(len(bg["blocks"])))]
        hx = bx0 + margin + rng.random() * (half - 2 * margin)
        hy = by0 + margin + rng.random() * (half - 2 * margin)
        hotspots.append({"block_group": bg["id"], "block": block, "x": hx, "y": hy})
    hotspot_xy = np.array([[h["x"], h["y"]] for h in hotspots]).reshape(-1, 2)

    # crimes
    crime_rows = []
    year_start = date(spec.year, 1, 1)
    days_in_year = (date(spec.year + 1, 1, 1) - year_start).days
    hour_p = HOUR_WEIGHTS / HOUR_WEIGHTS.sum()

    def emit_crimes(x: np.ndarray, y: np.ndarray, supers: List[str]):
        lon, lat = city.lonlat(x, y)
        days = rng.integers(days_in_year, size=len(x))
        hours = rng.choice(24, size=len(x), p=hour_p)
        minutes = rng.integers(60, size=len(x))
        for i, super_type in enumerate(supers):
            mix = VIOLENT_MIX if super_type == "violent" else NONVIOLENT_MIX
            category = _choice(rng, mix)
            when = year_start + timedelta(days=int(days[i]))
            clock = f"{int(hours[i]):02d}:{int(minutes[i]):02d}:00"
            crime_rows.append(
                {
                    "id": f"c{len(crime_rows) + 1:07d}",
                    "datetime": f"{when.isoformat()}T{clock}",
                    "lat": float(lat[i]),
                    "lon": float(lon[i]),
                    "category": category,
                }
            )

    expected_crimes = {}
    for bg in block_groups:
        pop = bg["population"]
        common = spec.income_coef * bg["income"] + spec.poverty_coef * bg["poverty"]
        lam_v = spec.violent_base + spec.violent_per_capita * pop + common
        lam_nv = spec.nonviolent_base + spec.nonviolent_per_capita * pop + common
        n_v = int(rng.poisson(max(lam_v, 0)))
        n_nv = int(rng.poisson(max(lam_nv, 0)))
        expected_crimes[bg["id"]] = {"violent": lam_v, "non_violent": lam_nv}
        n = n_v + n_nv
        x = bg["x0"] + rng.random(n) * E
        y = bg["y0"] + rng.random(n) * E
        emit_crimes(x, y, ["violent"] * n_v + ["non_violent"] * n_nv)

    for hotspot in hotspots:
        n = spec.hotspot_crimes
        x = hotspot["x"] + rng.normal(0, spec.hotspot_sd_m, n)
        y = hotspot["y"] + rng.normal(0, spec.hotspot_sd_m, n)
        violent = rng.random(n) < HOTSPOT_VIOLENT_SHARE
        supers = ["violent" if v else "non_violent" for v in violent]
        hotspot["violent"] = supers.count("violent")
        hotspot["non_violent"] = supers.count("non_violent")
        emit_crimes(x, y, supers)

    # background crime in the band around the city, at the mean unit rate
    W = spec.grid_size * E
    M = spec.context_margin_m
    if M > 0 and expected_crimes:
        band_area = (W + 2 * M) ** 2 - W**2
        for super_type in ("violent", "non_violent"):
            rate = np.mean([max(v[super_type], 0) for v in expected_crimes.values()])
            n = int(rng.poisson(rate / (E * E) * band_area))
            xy = _band_points(rng, n, W, M)
            emit_crimes(xy[:, 0], xy[:, 1], [super_type] * n)

    # lots and properties
    lot_features, property_rows = [], []
    L = spec.lot_edge_m
    per_side = max(1, int(E // L))
    sales_span = (date(spec.year, 12, 31) - SALES_START).days
    for bg in block_groups:
        for i in range(per_side):
            for j in range(per_side):
                lx0, ly0 = bg["x0"] + j * L, bg["y0"] + i * L
                cx, cy = lx0 + L / 2, ly0 + L / 2
                near = _nearest_hotspot_m(cx, cy, hotspot_xy) < spec.influence_m
                zoning = _zoning(rng, spec, near)
                raw = RAW_ZONING[zoning][int(rng.integers(len(RAW_ZONING[zoning])))]
                lot_id = f"L{len(lot_features) + 1:07d}"
                lot_features.append(
                    _feature(
                        city.square(lx0, ly0, L),
                        {"id": lot_id, "zoning": raw, "area_m2": L * L},
                    )
                )
                if zoning in (Zoning.RESIDENTIAL, Zoning.MIXED_USE, Zoning.COMMERCIAL):
                    lon, lat = city.lonlat(cx, cy)
                    offset = int(rng.integers(sales_span + 1))
                    sold = SALES_START + timedelta(days=offset)
                    property_rows.append(
                        {
                            "id": f"P{len(property_rows) + 1:07d}",
                            "lat": float(lat),
                            "lon": float(lon),
                            "residential": int(zoning != Zoning.COMMERCIAL),
                            "last_sale_date": sold.isoformat(),
                        }
                    )

    # businesses and listings
    listing_lines, businesses = [], []
    S = spec.business_spacing_m
    J = spec.business_jitter_m
    per_side = max(1, int(E // S))
    type_keys = list(type_mix)

    def emit_business(bx: float, by: float):
        business_type = _choice(rng, {t: type_mix[t] for t in type_keys})
        serial = len(businesses) + 1
        word = NAME_WORDS[int(rng.integers(len(NAME_WORDS)))]
        name = f"{word} {TYPE_WORDS[business_type]} {serial}"
        raw_options = RAW_CATEGORIES[business_type]
        categories = [raw_options[int(rng.integers(len(raw_options)))]]

        hours = None
        if rng.random() < spec.hours_fraction:
            open_hour, per_day = TYPICAL_HOURS[business_type]
            planted = spec.gym_hours_rule == "long_far"
            if business_type == BusinessType.GYM and planted:
                near = _nearest_hotspot_m(bx, by, hotspot_xy) < spec.influence_m
                per_day = GYM_SHORT_HOURS if near else GYM_LONG_HOURS
                per_day += int(rng.integers(0, GYM_HOURS_SPREAD + 1))
                open_hour = 5
            else:
                per_day = int(np.clip(per_day + rng.integers(-2, 3), 2, 24))
            hours = _hours_text(open_hour, per_day, rng.random() < 0.2)

        n_sources = 1 + int(rng.random() < spec.duplicate_fraction)
        if n_sources == 2 and rng.random() < spec.duplicate_fraction:
            n_sources += 1
        sources = [SOURCES[k] for k in rng.permutation(3)[:n_sources]]

        businesses.append(
            {
                "serial": serial,
                "type": business_type.value,
                "has_hours": hours is not None,
            }
        )
        for s, source in enumerate(sources):
            jx, jy = (0.0, 0.0)
            if s > 0:
                jx, jy = rng.uniform(-1, 1, 2) * LISTING_JITTER_M / 2
            lon, lat = city.lonlat(bx + jx, by + jy)
            listing = {
                "source": source,
                "source_id": f"{source.lower()}{serial:07d}",
                "name": name if s == 0 else _name_variant(rng, name),
                "lat": float(lat),
                "lon": float(lon),
                "categories": categories,
                "hours": hours if (s == 0 or rng.random() < 0.5) else None,
            }
            listing_lines.append(json.dumps(listing, sort_keys=True))

    for bg in block_groups:
        for i in range(per_side):
            for j in range(per_side):
                if rng.random() >= spec.business_density:
                    continue
                bx = bg["x0"] + (j + 0.5) * S + rng.uniform(-J, J)
                by = bg["y0"] + (i + 0.5) * S + rng.uniform(-J, J)
                emit_business(bx, by)

    # the band around the city: same density of businesses, no units
    if M > 0:
        k_lo, k_hi = -int(np.ceil(M / S)), int(np.ceil((W + M) / S))
        for i in range(k_lo, k_hi):
            for j in range(k_lo, k_hi):
                cx, cy = (j + 0.5) * S, (i + 0.5) * S
                if not _in_band(cx, cy, W, M):
                    continue
                if rng.random() >= spec.business_density:
                    continue
                emit_business(cx + rng.uniform(-J, J), cy + rng.uniform(-J, J))

    # write
    _write_geojson(os.path.join(out_dir, "geounits.geojson"), unit_features)
    write_csv(pd.DataFrame(population_rows), os.path.join(out_dir, "population.csv"))
    write_csv(pd.DataFrame(acs_rows), os.path.join(out_dir, "acs.csv"))
    _write_geojson(os.path.join(out_dir, "lots.geojson"), lot_features)
    write_csv(
        pd.DataFrame(crime_rows, columns=["id", "datetime", "lat", "lon", "category"]),
        os.path.join(out_dir, "crimes.csv"),
    )
    write_csv(
        pd.DataFrame(
            property_rows, columns=["id", "lat", "lon", "residential", "last_sale_date"]
        ),
        os.path.join(out_dir, "properties.csv"),
    )
    with open(os.path.join(out_dir, "listings.jsonl"), "w") as f:
        f.writelines(line + "\n" for line in listing_lines)
    shutil.copyfile(DEFAULT_CATEGORY_MAP, os.path.join(out_dir, "category_map.csv"))

    ground_truth = {
        "spec": spec.to_dict(),
        "ingest_date": date(spec.year + 1, 1, 1).isoformat(),
        "coefficients": {
            "violent": {
                "intercept": spec.violent_base,
                "population": spec.violent_per_capita,
                "per_capita_income": spec.income_coef,
                "poverty": spec.poverty_coef,
            },
            "non_violent": {
                "intercept": spec.nonviolent_base,
                "population": spec.nonviolent_per_capita,
                "per_capita_income": spec.income_coef,
                "poverty": spec.poverty_coef,
            },
        },
        "expected_crimes": expected_crimes,
        "hotspots": [
            {
                "block_group": h["block_group"],
                "block": h["block"],
                "lon": float(city.lonlat(h["x"], h["y"])[0]),
                "lat": float(city.lonlat(h["x"], h["y"])[1]),
                "violent": h["violent"],
                "non_violent": h["non_violent"],
            }
            for h in hotspots
        ],
        "counts": {
            "block_groups": len(block_groups),
            "blocks": len(block_groups) * BLOCKS_PER_SIDE**2,
            "units": len(unit_features),
            "lots": len(lot_features),
            "crimes": len(crime_rows),
            "properties": len(property_rows),
            "listings": len(listing_lines),
            "businesses": len(businesses),
            "businesses_with_hours": sum(b["has_hours"] for b in businesses),
        },
    }
    with open(os.path.join(out_dir, Outputs.GROUND_TRUTH), "w") as f:
        json.dump(ground_truth, f, indent=2, sort_keys=True)

    ulogger.info(
        f"Synthetic city (seed {spec.seed}) written to {out_dir}: "
        f"{ground_truth['counts']}"
    )
    return ground_truth
