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
All the subconfigs for UrbanVibe
"""

import inspect
from typing import Any, Dict, List, Optional
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from urbanvibe.classes.enums import UnitLevel
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.classes.schedule import TimeWindow


class SubConfig:
    """
    Shared dict conversion for subconfigs.

    Every constructor argument is stored under the same attribute name,
    so `from_dict(to_dict())` rebuilds an equal subconfig.
    """

    @classmethod
    def keys(cls) -> List[str]:
        params = inspect.signature(cls.__init__).parameters
        return [name for name in params if name != "self"]

    def to_dict(self) -> Dict[str, Any]:
        out = {}
        for key in self.keys():
            value = getattr(self, key)
            if isinstance(value, UnitLevel):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SubConfig":
        unknown = sorted(set(data) - set(cls.keys()))
        if unknown:
            raise DataValidationError(
                f"Unknown keys for {cls.__name__}: {', '.join(unknown)}"
            )
        return cls(**data)

    def validate(self):
        pass

    def _require_positive(self, *names: str):
        for name in names:
            value = getattr(self, name)
            if value is None or not value > 0:
                raise DataValidationError(
                    f"{type(self).__name__}.{name} must be positive, got {value!r}"
                )

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.to_dict() == other.to_dict()


class PathsConfig(SubConfig):
    def __init__(
        self,
        geounits: str = None,
        population: str = None,
        acs: str = None,
        lots: str = None,
        crimes: str = None,
        properties: str = None,
        listings: str = None,
        category_map: str = None,
        output_dir: str = "./urbanvibe-data/output",
    ):
        """
        Dataset locations.

        :param geounits (str): GeoJSON of blocks and block groups.
        :param population (str): CSV of id, population.
        :param acs (str): CSV of id, per_capita_income, b1..b7.
        :param lots (str): GeoJSON of land lots.
        :param crimes (str): CSV of crime events.
        :param properties (str): CSV of property sales.
        :param listings (str): JSONL of raw business listings.
        :param category_map (str): CSV of raw_category, business_type.
                                   None uses the bundled map.
        :param output_dir (str): Where stage outputs are written.
        """
        self.geounits = geounits
        self.population = population
        self.acs = acs
        self.lots = lots
        self.crimes = crimes
        self.properties = properties
        self.listings = listings
        self.category_map = category_map
        self.output_dir = output_dir

    def inputs(self) -> Dict[str, Optional[str]]:
        """
        The input file paths, keyed by dataset name.
        """
        return {
            key: getattr(self, key) for key in self.keys() if key != "output_dir"
        }


class IngestConfig(SubConfig):
    def __init__(
        self,
        timezone: str = "America/New_York",
        ingest_date: str = None,
        min_block_population: int = 25,
        min_block_group_population: int = 400,
        dedup_name_similarity: float = 0.7,
        dedup_distance_m: float = 50.0,
        max_skip_rate: float = 0.01,
        bracket_tolerance: float = 1e-6,
    ):
        """
        Ingest Subconfig.

        :param timezone (str): IANA zone all timestamps are read in.
        :param ingest_date (str): YYYY-MM-DD reference date for tenure.
                                  None uses the latest sale date on file,
                                  else the latest crime date.
        :param min_block_population (int): Blocks below this are flagged.
        :param min_block_group_population (int): Block groups below this are flagged.
        :param dedup_name_similarity (float): Token-set Jaccard needed to merge.
        :param dedup_distance_m (float): Largest distance between merged listings.
        :param max_skip_rate (float): Largest fraction of skipped rows per file.
        :param bracket_tolerance (float): Tolerance on poverty bracket sums.
        """
        self.timezone = timezone
        self.ingest_date = ingest_date
        self.min_block_population = min_block_population
        self.min_block_group_population = min_block_group_population
        self.dedup_name_similarity = dedup_name_similarity
        self.dedup_distance_m = dedup_distance_m
        self.max_skip_rate = max_skip_rate
        self.bracket_tolerance = bracket_tolerance

    def validate(self):
        try:
            ZoneInfo(self.timezone)
        except (ZoneInfoNotFoundError, ValueError, TypeError):
            raise DataValidationError(f"Invalid timezone: {self.timezone!r}")

        self._require_positive(
            "min_block_population",
            "min_block_group_population",
            "dedup_name_similarity",
            "dedup_distance_m",
            "bracket_tolerance",
        )
        if self.dedup_name_similarity > 1:
            raise DataValidationError("dedup_name_similarity must be at most 1")
        if not 0 <= self.max_skip_rate < 1:
            raise DataValidationError("max_skip_rate must be in [0, 1)")


class WindowsConfig(SubConfig):
    def __init__(self, windows: Dict[str, Dict[str, List[str]]] = None):
        """
        Named weekly time windows.

        :param windows (dict): Window name to per-day "HH:MM-HH:MM" ranges.
                               An empty mapping is the whole week.
        """
        self.windows = windows or {}

    def get_windows(self) -> List[TimeWindow]:
        """
        The windows, in configured order.

        :raises DataValidationError: If a window is malformed.
        """
        try:
            return [
                TimeWindow.from_spec(name, spec) for name, spec in self.windows.items()
            ]
        except ValueError as e:
            raise DataValidationError(f"Invalid time window: {e}")

    def get_window(self, name: str) -> TimeWindow:
        for window in self.get_windows():
            if window.name == name:
                return window
        raise DataValidationError(f"No time window named {name!r}")

    def validate(self):
        if not self.windows:
            raise DataValidationError("At least one time window is required")
        self.get_windows()


class MetricsConfig(SubConfig):
    def __init__(
        self,
        poverty_weights: List[float] = None,
        tenure_radius_m: float = None,
        prefer_area_attribute: bool = True,
    ):
        """
        Metrics Subconfig.

        :param poverty_weights (list): The 7 bracket weights.
        :param tenure_radius_m (float): Radius for ownership tenure.
                                        None uses the high/low radius.
        :param prefer_area_attribute (bool): Use the dataset's area when present.
        """
        self.poverty_weights = (
            list(poverty_weights)
            if poverty_weights is not None
            else [1, 5 / 6, 4 / 6, 3 / 6, 2 / 6, 1 / 6, 0]
        )
        self.tenure_radius_m = tenure_radius_m
        self.prefer_area_attribute = prefer_area_attribute

    def validate(self):
        if self.tenure_radius_m is not None:
            self._require_positive("tenure_radius_m")

        w = self.poverty_weights
        if len(w) != 7:
            raise DataValidationError("poverty_weights needs exactly 7 weights")
        if w[0] != 1 or w[-1] != 0:
            raise DataValidationError("poverty_weights must start at 1 and end at 0")
        if any(a < b for a, b in zip(w, w[1:])):
            raise DataValidationError("poverty_weights must be non-increasing")


class RegressionConfig(SubConfig):
    def __init__(
        self,
        huber_t: float = 1.345,
        tol: float = 1e-8,
        max_iter: int = 50,
        min_n: int = 10,
        income_split: float = 50000.0,
        confidence: float = 0.95,
        level: str = UnitLevel.BLOCK_GROUP,
    ):
        """
        Robust Regression Subconfig.

        :param huber_t (float): Huber tuning constant, in units of scale.
        :param tol (float): Convergence tolerance on the coefficients.
        :param max_iter (int): Maximum IRLS iterations.
        :param min_n (int): Association rows below this n are flagged.
        :param income_split (float): Income threshold for the split association rows.
        :param confidence (float): Level of the fitted line bands.
        :param level (UnitLevel): Unit level the regressions run at.
        """
        self.huber_t = huber_t
        self.tol = tol
        self.max_iter = max_iter
        self.min_n = min_n
        self.income_split = income_split
        self.confidence = confidence
        self.level = UnitLevel(level)

    def validate(self):
        self._require_positive("huber_t", "tol", "max_iter", "min_n", "income_split")
        if not 0 < self.confidence < 1:
            raise DataValidationError("confidence must be in (0, 1)")


class MatchingConfig(SubConfig):
    def __init__(
        self,
        hilo_radius_m: float = 50.0,
        hilo_separation_m: float = 100.0,
        hours_radius_m: float = 70.0,
        hours_separation_m: float = 140.0,
        grid_spacing_m: float = 10.0,
        low_percentile: float = 25.0,
        high_percentile: float = 75.0,
        alpha: float = 0.05,
        hilo_business_level: str = UnitLevel.BLOCK,
        hilo_landuse_level: str = UnitLevel.BLOCK_GROUP,
        hours_level: str = UnitLevel.BLOCK_GROUP,
        processes: int = 1,
    ):
        """
        Matched Pairs Subconfig.

        :param hilo_radius_m (float): Counting and measuring radius, high/low study.
        :param hilo_separation_m (float): Minimum high/low separation.
        :param hours_radius_m (float): Crime counting radius, hours study.
        :param hours_separation_m (float): Minimum long/short separation.
        :param grid_spacing_m (float): Candidate grid spacing for extremes.
        :param low_percentile (float): Open hours percentile for "short".
        :param high_percentile (float): Open hours percentile for "long".
        :param alpha (float): Family-wise significance level.
        :param hilo_business_level (UnitLevel): Unit level for business measures.
        :param hilo_landuse_level (UnitLevel): Unit level for land use and tenure.
        :param hours_level (UnitLevel): Unit level for the hours study.
        :param processes (int): Worker processes for per-unit pair discovery.
        """
        self.hilo_radius_m = hilo_radius_m
        self.hilo_separation_m = hilo_separation_m
        self.hours_radius_m = hours_radius_m
        self.hours_separation_m = hours_separation_m
        self.grid_spacing_m = grid_spacing_m
        self.low_percentile = low_percentile
        self.high_percentile = high_percentile
        self.alpha = alpha
        self.hilo_business_level = UnitLevel(hilo_business_level)
        self.hilo_landuse_level = UnitLevel(hilo_landuse_level)
        self.hours_level = UnitLevel(hours_level)
        self.processes = processes

    def validate(self):
        self._require_positive(
            "hilo_radius_m",
            "hilo_separation_m",
            "hours_radius_m",
            "hours_separation_m",
            "grid_spacing_m",
            "processes",
        )
        if not 0 <= self.low_percentile < self.high_percentile <= 100:
            raise DataValidationError("percentiles must satisfy 0 <= low < high <= 100")
        if not 0 < self.alpha < 1:
            raise DataValidationError("alpha must be in (0, 1)")


class SynthConfig(SubConfig):
    def __init__(
        self,
        spec_file: str = None,
        seed: int = 0,
        out_dir: str = "./urbanvibe-data/synth",
    ):
        """
        Synthetic City Subconfig.

        :param spec_file (str): YAML city spec. None uses the planted city.
        :param seed (int): Seed, overriding the spec's.
        :param out_dir (str): Where the generated files are written.
        """
        self.spec_file = spec_file
        self.seed = seed
        self.out_dir = out_dir
