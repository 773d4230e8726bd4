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
The synthetic city specification.
"""

from typing import Dict, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field

from urbanvibe.classes.errors import DataValidationError

DEFAULT_TYPE_MIX = {
    "Cafe": 0.12,
    "Convenience": 0.08,
    "Gym": 0.25,
    "Institution": 0.08,
    "Liquor": 0.04,
    "Lodging": 0.03,
    "Nightlife": 0.10,
    "Pharmacy": 0.04,
    "Restaurant": 0.16,
    "Retail": 0.10,
}

DEFAULT_ZONING_MIX = {
    "residential": 0.55,
    "commercial": 0.15,
    "mixed_use": 0.08,
    "vacant": 0.12,
    "industrial": 0.04,
    "park": 0.03,
    "civic": 0.03,
}


class SynthSpec(BaseModel):
    """
    A synthetic city: a square grid of block groups, each split into 2 x 2
    blocks, with planted relationships between population, economics,
    crime, land use and business hours.
    """

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    grid_size: int = Field(default=10, ge=1, description="Block groups per side")
    unit_edge_m: float = Field(default=240.0, gt=0, description="Block group edge")
    origin_lon: float = Field(default=-75.20, ge=-180, le=180)
    origin_lat: float = Field(default=39.95, ge=-80, le=80)
    timezone: str = "UTC"
    year: int = 2014

    # population and economics, per block group
    population_base: float = Field(default=800.0, ge=0)
    population_noise: float = Field(default=250.0, ge=0)
    income_mean: float = Field(default=35000.0, gt=0)
    income_sd: float = Field(default=15000.0, ge=0)

    # expected crimes = base + per_capita * population + income_coef * income
    #                   + poverty_coef * poverty, then Poisson
    violent_base: float = Field(default=0.0, ge=0)
    nonviolent_base: float = Field(default=0.0, ge=0)
    violent_per_capita: float = Field(default=0.03, ge=0)
    nonviolent_per_capita: float = Field(default=0.1, ge=0)
    income_coef: float = 0.0
    poverty_coef: float = 0.0

    # hotspots
    hotspot_fraction: float = Field(default=1.0, ge=0, le=1)
    hotspot_crimes: int = Field(default=40, ge=0)
    hotspot_sd_m: float = Field(default=4.0, gt=0)
    hotspot_margin_m: float = Field(default=15.0, ge=0)

    # land use
    lot_edge_m: float = Field(default=30.0, gt=0)
    zoning_mix: Dict[str, float] = Field(
        default_factory=lambda: dict(DEFAULT_ZONING_MIX)
    )
    vacancy_rule: Literal["none", "far", "near"] = "far"
    influence_m: float = Field(default=70.0, gt=0)

    # businesses
    business_spacing_m: float = Field(default=30.0, gt=0)
    business_jitter_m: float = Field(default=3.0, ge=0)
    business_density: float = Field(default=0.9, ge=0, le=1)
    type_mix: Dict[str, float] = Field(default_factory=lambda: dict(DEFAULT_TYPE_MIX))
    hours_fraction: float = Field(default=0.8, ge=0, le=1)
    gym_hours_rule: Literal["none", "long_far"] = "long_far"
    duplicate_fraction: float = Field(default=0.3, ge=0, le=1)

    # background crimes and businesses in a band around the city, with no units
    context_margin_m: float = Field(default=0.0, ge=0)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        try:
            return cls.model_validate(data or {})
        except ValueError as e:
            raise DataValidationError(f"Invalid synth spec: {e}")

    def to_yaml(self, path: str):
        with open(path, "w") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=True)


def load_synth_spec(path: str) -> SynthSpec:
    """
    Read a synth spec from YAML. Keys left out take their defaults.

    :raises DataValidationError: On unknown keys or invalid values.
    """
    with open(path, "r") as f:
        return SynthSpec.from_dict(yaml.safe_load(f))


def planted_city(seed: int = 0) -> SynthSpec:
    """
    Crime = 0.1 x population (non-violent) plus one hotspot per block group,
    vacant lots away from hotspots and long-hours gyms away from hotspots.
    """
    return SynthSpec(seed=seed)


def null_city(seed: int = 0) -> SynthSpec:
    """
    No planted signal: crime independent of population, no hotspots,
    uniform land use and gym hours. 20 x 20 block groups, surrounded by an
    80 m band of background crime and businesses.
    """
    return SynthSpec(
        seed=seed,
        grid_size=20,
        violent_base=25.0,
        nonviolent_base=80.0,
        violent_per_capita=0.0,
        nonviolent_per_capita=0.0,
        hotspot_fraction=0.0,
        vacancy_rule="none",
        gym_hours_rule="none",
        business_jitter_m=15.0,
        context_margin_m=80.0,
    )
