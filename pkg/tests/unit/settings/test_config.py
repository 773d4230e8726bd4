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

import pytest

from urbanvibe.classes.enums import UnitLevel
from urbanvibe.classes.errors import DataValidationError
from urbanvibe.defaults.city_configs import default_city, synth_city_config
from urbanvibe.settings.config import Config
from urbanvibe.settings.subconfig import MatchingConfig, MetricsConfig


def test_default_windows(config):
    windows = {w.name: w for w in config.windows.get_windows()}
    assert list(windows) == ["week", "weekday_evenings", "weekend_nights"]
    assert windows["week"].is_whole_week
    assert windows["weekday_evenings"].minutes == 5 * 6 * 60
    assert windows["weekend_nights"].minutes == 2 * 4 * 60


def test_register_and_get(config):
    config.register("unit_test_city", silent=True)
    try:
        assert Config.get_config("unit_test_city") is config
        assert ("unit_test_city", config) in Config.get_configs()
        with pytest.raises(ValueError, match="already exists"):
            config.get_copy().register("unit_test_city", silent=True)
    finally:
        config.unregister(silent=True)

    with pytest.raises(ValueError, match="does not exist"):
        Config.get_config("unit_test_city")


def test_yaml_round_trip(tmp_path, config):
    path = tmp_path / "config.yaml"
    config.to_yaml(str(path))
    assert Config.from_yaml(str(path)) == config


def test_partial_yaml_takes_base(tmp_path, config):
    path = tmp_path / "config.yaml"
    path.write_text("matching:\n  alpha: 0.01\nregression:\n  level: block\n")
    loaded = Config.from_yaml(str(path), base=config)
    assert loaded.matching.alpha == 0.01
    assert loaded.regression.level == UnitLevel.BLOCK
    assert loaded.ingest.timezone == config.ingest.timezone


def test_unknown_section_or_key(tmp_path, config):
    with pytest.raises(DataValidationError, match="Unknown config sections"):
        Config.from_dict({"plots": {}}, base=config)
    with pytest.raises(DataValidationError, match="Unknown keys for MatchingConfig"):
        Config.from_dict({"matching": {"colour": "red"}}, base=config)


def test_apply_overrides(config):
    new = config.apply_overrides(["matching.alpha=0.01", "matching.processes=2"])
    assert new.matching.alpha == 0.01
    assert new.matching.processes == 2
    assert config.matching.alpha == 0.05
    assert new.name == config.name


@pytest.mark.parametrize(
    "override, match",
    [
        ("matching.alpha", "must look like"),
        ("alpha=0.1", "must look like"),
        ("matching.beta=0.1", "Unknown config key"),
        ("matching.alpha=2", "alpha must be in"),
    ],
)
def test_bad_overrides(config, override, match):
    with pytest.raises(DataValidationError, match=match):
        config.apply_overrides([override])


def test_config_hash(config):
    moved = config.get_copy()
    moved.paths.output_dir = "/elsewhere"
    assert moved.config_hash() == config.config_hash()

    changed = config.apply_overrides(["matching.hilo_radius_m=75"])
    assert changed.config_hash() != config.config_hash()


def test_validation():
    with pytest.raises(DataValidationError, match="non-increasing"):
        MetricsConfig(poverty_weights=[1, 0.5, 0.6, 0.4, 0.2, 0.1, 0]).validate()
    with pytest.raises(DataValidationError, match="percentiles"):
        MatchingConfig(low_percentile=80, high_percentile=20).validate()
    with pytest.raises(DataValidationError, match="Invalid timezone"):
        default_city.apply_overrides(["ingest.timezone=Mars/Olympus"])


def test_synth_city_config(tmp_path):
    config = synth_city_config(str(tmp_path), name="tmp_city")
    assert config.paths.crimes == str(tmp_path / "crimes.csv")
    assert config.paths.output_dir == str(tmp_path / "output")
    assert config.ingest.ingest_date == "2015-01-01"
    assert config.name == "tmp_city"
