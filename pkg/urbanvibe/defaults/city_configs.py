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
Default Working Configs for UrbanVibe

Import them directly from the urbanvibe package.

We don't store them, so that the registry only holds user configs.
"""

import json
import os

from urbanvibe.settings.enums import Outputs

from .config import base_config

SYNTH_FILES = {
    "geounits": "geounits.geojson",
    "population": "population.csv",
    "acs": "acs.csv",
    "lots": "lots.geojson",
    "crimes": "crimes.csv",
    "properties": "properties.csv",
    "listings": "listings.jsonl",
    "category_map": "category_map.csv",
}

default_city = base_config.get_copy()
default_city.register(name="default_city", store=False, silent=True)


def synth_city_config(synth_dir: str, output_dir: str = None, name: str = None):
    """
    A config pointing at the files written by `urbanvibe.synth.generate`.

    The ingest date and timezone are taken from the city's ground truth
    when it is present.

    :param synth_dir: Directory the synthetic city was written to.
    :param output_dir: Where stage outputs go. Defaults to synth_dir/output.
    :param name: Name to give the (unstored) config.
    """
    config = default_city.get_copy()
    for key, file_name in SYNTH_FILES.items():
        setattr(config.paths, key, os.path.join(synth_dir, file_name))
    config.paths.output_dir = output_dir or os.path.join(synth_dir, "output")

    config.ingest.timezone = "UTC"
    config.ingest.ingest_date = "2015-01-01"
    truth_path = os.path.join(synth_dir, Outputs.GROUND_TRUTH)
    if os.path.exists(truth_path):
        with open(truth_path, "r") as f:
            truth = json.load(f)
        config.ingest.ingest_date = truth["ingest_date"]
        config.ingest.timezone = truth["spec"]["timezone"]

    config.synth.out_dir = synth_dir
    config.validate()
    config.register(name=name or "synth_city", store=False, silent=True)
    return config


test_city = default_city.get_copy()
test_city.ingest.timezone = "UTC"
test_city.ingest.ingest_date = "2015-01-01"
test_city.register(name="test_city", store=False, silent=True)
