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
Default Configs for Each Subconfig in the Settings Module.
"""

from urbanvibe.classes.enums import UnitLevel
from urbanvibe.settings.config import Config
from urbanvibe.settings.subconfig import (
    IngestConfig,
    MatchingConfig,
    MetricsConfig,
    PathsConfig,
    RegressionConfig,
    SynthConfig,
    WindowsConfig,
)

URBANVIBE_DATA_DIR = "./urbanvibe-data"

WEEKDAYS = ["mon", "tue", "wed", "thu", "fri"]

paths = PathsConfig(
    geounits=f"{URBANVIBE_DATA_DIR}/city/geounits.geojson",
    population=f"{URBANVIBE_DATA_DIR}/city/population.csv",
    acs=f"{URBANVIBE_DATA_DIR}/city/acs.csv",
    lots=f"{URBANVIBE_DATA_DIR}/city/lots.geojson",
    crimes=f"{URBANVIBE_DATA_DIR}/city/crimes.csv",
    properties=f"{URBANVIBE_DATA_DIR}/city/properties.csv",
    listings=f"{URBANVIBE_DATA_DIR}/city/listings.jsonl",
    category_map=None,
    output_dir=f"{URBANVIBE_DATA_DIR}/output",
)

ingest = IngestConfig(
    timezone="America/New_York",
    ingest_date=None,
    min_block_population=25,
    min_block_group_population=400,
    dedup_name_similarity=0.7,
    dedup_distance_m=50.0,
    max_skip_rate=0.01,
    bracket_tolerance=1e-6,
)

windows = WindowsConfig(
    windows={
        "week": {},
        "weekday_evenings": {day: ["18:00-24:00"] for day in WEEKDAYS},
        "weekend_nights": {"sat": ["00:00-04:00"], "sun": ["00:00-04:00"]},
    }
)

metrics = MetricsConfig(
    poverty_weights=[1, 5 / 6, 4 / 6, 3 / 6, 2 / 6, 1 / 6, 0],
    tenure_radius_m=None,
    prefer_area_attribute=True,
)

regression = RegressionConfig(
    huber_t=1.345,
    tol=1e-8,
    max_iter=50,
    min_n=10,
    income_split=50000.0,
    confidence=0.95,
    level=UnitLevel.BLOCK_GROUP,
)

matching = MatchingConfig(
    hilo_radius_m=50.0,
    hilo_separation_m=100.0,
    hours_radius_m=70.0,
    hours_separation_m=140.0,
    grid_spacing_m=10.0,
    low_percentile=25.0,
    high_percentile=75.0,
    alpha=0.05,
    hilo_business_level=UnitLevel.BLOCK,
    hilo_landuse_level=UnitLevel.BLOCK_GROUP,
    hours_level=UnitLevel.BLOCK_GROUP,
    processes=1,
)

synth = SynthConfig(
    spec_file=None,
    seed=0,
    out_dir=f"{URBANVIBE_DATA_DIR}/synth",
)

base_config = Config(
    template=True,
    subconfig_paths=paths,
    subconfig_ingest=ingest,
    subconfig_windows=windows,
    subconfig_metrics=metrics,
    subconfig_regression=regression,
    subconfig_matching=matching,
    subconfig_synth=synth,
)
