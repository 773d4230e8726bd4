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

import copy
import logging
import os
from datetime import date

import afterthought
import pytest
import yaml

from tests.fixtures.unit import ORIGIN, square_unit
from urbanvibe.classes.enums import UnitLevel, Zoning
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.defaults.city_configs import test_city
from urbanvibe.geometry.primitives import GeoPoint, offset_m
from urbanvibe.ingest.classes import GeoUnit, LandLot, PropertyRecord
from urbanvibe.settings.config import Config

logging.basicConfig(level=logging.DEBUG)
log = logging.getLogger(__name__)


@pytest.fixture(scope="session", autouse=True)
def set_env():
    os.environ["URBANVIBE_LOG_LEVEL"] = "DEBUG"


data_units = [
    square_unit("bg1", 0, 0, 200, per_capita_income=30000.0),
    square_unit("bg2", 200, 0, 200, per_capita_income=60000.0),
    square_unit("b11", 0, 0, 100, UnitLevel.BLOCK, 300, parent_id="bg1"),
    square_unit("b12", 100, 0, 100, UnitLevel.BLOCK, 10, parent_id="bg1"),
]
data_units[3].included = False

data_lots = [
    LandLot("l1", offset_m(ORIGIN, 25, 25), 100.0, Zoning.VACANT),
    LandLot("l2", offset_m(ORIGIN, 75, 25), 200.0, Zoning.COMMERCIAL),
    LandLot("l3", offset_m(ORIGIN, 25, 75), 200.0, Zoning.RESIDENTIAL),
    LandLot("l4", offset_m(ORIGIN, 75, 75), 500.0, Zoning.MIXED_USE),
    LandLot("l5", offset_m(ORIGIN, 300, 100), 400.0, Zoning.PARK),
]

data_properties = [
    PropertyRecord("p1", offset_m(ORIGIN, 50, 50), True, date(2010, 1, 1)),
    PropertyRecord("p2", offset_m(ORIGIN, 60, 50), True, date(2014, 1, 1)),
    PropertyRecord("p3", offset_m(ORIGIN, 55, 50), False, date(1990, 1, 1)),
    PropertyRecord("p4", offset_m(ORIGIN, 350, 150), True, date(2000, 1, 1)),
]


@pytest.fixture
def origin() -> GeoPoint:
    return ORIGIN


@pytest.fixture
def units():
    return copy.deepcopy(data_units)


@pytest.fixture
def block_group(units) -> GeoUnit:
    return units[0]


@pytest.fixture
def lots():
    return copy.deepcopy(data_lots)


@pytest.fixture
def properties():
    return copy.deepcopy(data_properties)


@pytest.fixture
def config() -> Config:
    return test_city.get_copy()


@pytest.fixture
def windows(config):
    return config.windows.get_windows()


@pytest.fixture
def evening() -> TimeWindow:
    return TimeWindow.from_spec("evening", {"mon": ["18:00-24:00"]})


def pytest_addoption(parser):
    parser.addoption(
        "--capture-errors",
        action="store_true",
        default=False,
        help="Capture and pass errors to afterthought",
    )


# This will hold all the exceptions
exceptions = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    result = outcome.get_result()

    if result.when == "call" and result.failed:
        error = {
            "nodeid": result.nodeid,
            "location": result.location,
            "longrepr": str(result.longrepr),
            "exception": call.excinfo.value,  # Capture the exception object
        }
        exceptions.append(error)


def pytest_sessionfinish(session, exitstatus):
    capture_errors = session.config.getoption("--capture-errors")

    if not capture_errors:
        return

    # This hook is called after the test session ends
    for error in exceptions:
        afterthought.debug(error=error["exception"])


pytest_plugins = [
    "tests.fixtures.intergration",
    "tests.fixtures.unit",
]


def load_previous_release_note():
    # Locate the most recent YAML file in ./changenotes/
    release_dir = "./changenotes/"
    yaml_files = [f for f in os.listdir(release_dir) if f.endswith(".yaml")]
    yaml_files.sort(reverse=True)
    if yaml_files:
        with open(os.path.join(release_dir, yaml_files[0]), "r") as f:
            return yaml.safe_load(f), yaml_files[0]
    return None, None


previous_data, previous_filename = load_previous_release_note()
current_output = previous_data["current_output"]


@pytest.fixture
def values_geometry():
    return current_output["geometry"]


@pytest.fixture
def values_economic():
    return current_output["economic"]


@pytest.fixture
def values_stats():
    return current_output["stats"]


@pytest.fixture(scope="session")
def values_synth():
    return current_output["synth"]
