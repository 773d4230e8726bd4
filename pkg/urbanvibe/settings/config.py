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
The parent class for UrbanVibe configs
"""

import copy
import hashlib
import json
from typing import Any, Dict, List, Tuple

import yaml

from urbanvibe.classes.errors import DataValidationError
from urbanvibe.logs import ulogger
from urbanvibe.settings.subconfig import (
    IngestConfig,
    MatchingConfig,
    MetricsConfig,
    PathsConfig,
    RegressionConfig,
    SubConfig,
    SynthConfig,
    WindowsConfig,
)

SECTIONS = {
    "paths": PathsConfig,
    "ingest": IngestConfig,
    "windows": WindowsConfig,
    "metrics": MetricsConfig,
    "regression": RegressionConfig,
    "matching": MatchingConfig,
    "synth": SynthConfig,
}


class Config:
    """Configuration class."""

    configs = {}

    def __init__(
        self,
        subconfig_paths: PathsConfig,
        subconfig_ingest: IngestConfig,
        subconfig_windows: WindowsConfig,
        subconfig_metrics: MetricsConfig,
        subconfig_regression: RegressionConfig,
        subconfig_matching: MatchingConfig,
        subconfig_synth: SynthConfig,
        template: bool = False,
        name: str = None,
    ):
        """
        Initialize Config.

        :param subconfig_paths (PathsConfig): The dataset paths subconfig.
        :param subconfig_ingest (IngestConfig): The ingest subconfig.
        :param subconfig_windows (WindowsConfig): The time windows subconfig.
        :param subconfig_metrics (MetricsConfig): The metrics subconfig.
        :param subconfig_regression (RegressionConfig): The regression subconfig.
        :param subconfig_matching (MatchingConfig): The matching subconfig.
        :param subconfig_synth (SynthConfig): The synthetic city subconfig.
        :param template (bool): Whether this is a template config.
        :param name (str): The name of the config.

        :raises DataValidationError: If any value is out of range.
        """
        self.name = name

        if not (template or name):
            raise ValueError("Non-template configs must have a name specified.")

        self.paths: PathsConfig = subconfig_paths
        self.ingest: IngestConfig = subconfig_ingest
        self.windows: WindowsConfig = subconfig_windows
        self.metrics: MetricsConfig = subconfig_metrics
        self.regression: RegressionConfig = subconfig_regression
        self.matching: MatchingConfig = subconfig_matching
        self.synth: SynthConfig = subconfig_synth

        self.validate()

        if not template and name:
            self.register(name)

    def validate(self):
        """
        Validate every subconfig.

        :raises DataValidationError: If any value is out of range.
        """
        for section in SECTIONS:
            getattr(self, section).validate()

    def register(self, name: str, store: bool = True, silent: bool = False):
        """
        Register the config.

        :param name (str): The name of the config.
        :param store (bool): Whether to store the config
                             for later retrieval.
        :param silent (bool): Whether to skip the log line.
        """
        self.name = name

        # check if config already exists
        if self.configs.get(name):
            raise ValueError(f"Config {name} already exists.")

        if store:
            self.configs[name] = self

        if not silent:
            ulogger.info(f"Registered config for {name}")

    def unregister(self, silent: bool = False):
        """
        Unregister the config.
        """
        if self.name in self.configs:
            del self.configs[self.name]

        if not silent:
            ulogger.info(f"Unregistered config for {self.name}")

    def get_copy(self) -> "Config":
        """
        Get a copy of the config.

        :return: A copy of the config.
        """
        return copy.deepcopy(self)

    @classmethod
    def get_configs(cls) -> List[Tuple[str, "Config"]]:
        """
        Get all registered/stored configs.

        :return: A list of tuples of name and config.
        """
        return [(name, config) for name, config in cls.configs.items()]

    @classmethod
    def get_config(cls, name: str) -> "Config":
        """
        Get a config by name.

        :param name (str): The name of the config.

        :return: The config.
        """
        if isinstance(name, Config):
            return name

        if not cls.configs.get(name):
            raise ValueError(f"Config {name} does not exist.")

        return cls.configs[name]

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        """
        Plain-data form of the config, as written to YAML.
        """
        return {section: getattr(self, section).to_dict() for section in SECTIONS}

    @classmethod
    def from_dict(
        cls, data: Dict[str, Dict[str, Any]], base: "Config" = None
    ) -> "Config":
        """
        Build a template config from plain data.

        :param data: Sections of keys, as produced by `to_dict`.
        :param base: Config supplying the keys `data` leaves out.

        :raises DataValidationError: On unknown sections, keys or bad values.
        """
        data = data or {}
        unknown = sorted(set(data) - set(SECTIONS))
        if unknown:
            raise DataValidationError(f"Unknown config sections: {', '.join(unknown)}")

        merged = base.to_dict() if base is not None else {s: {} for s in SECTIONS}
        for section, values in data.items():
            if not isinstance(values, dict):
                raise DataValidationError(f"Config section {section} must be a mapping")
            merged[section].update(values)

        subconfigs = {
            f"subconfig_{section}": SECTIONS[section].from_dict(merged[section])
            for section in SECTIONS
        }
        return cls(template=True, **subconfigs)

    @classmethod
    def from_yaml(cls, path: str, base: "Config" = None) -> "Config":
        """
        Load a config from a YAML file.

        :param path: The YAML file.
        :param base: Config supplying the keys the file leaves out.
        """
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
        return cls.from_dict(data, base=base)

    def to_yaml(self, path: str):
        with open(path, "w") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=True)

    def apply_overrides(self, overrides: List[str]) -> "Config":
        """
        Override single keys using dotted names, e.g. "matching.alpha=0.01".

        Values are parsed as YAML scalars.

        :return: A new, validated config.

        :raises DataValidationError: On a malformed override or unknown key.
        """
        data = self.to_dict()
        for override in overrides or []:
            key, sep, raw = str(override).partition("=")
            section, dot, field = key.strip().partition(".")
            if not (sep and dot):
                raise DataValidationError(
                    f"Override {override!r} must look like section.key=value"
                )
            if section not in data or field not in data[section]:
                raise DataValidationError(f"Unknown config key: {key.strip()}")
            data[section][field] = yaml.safe_load(raw)

        new = Config.from_dict(data)
        new.name = self.name
        return new

    def config_hash(self) -> str:
        """
        SHA-256 of the analysis-relevant settings.

        The output directory is left out so a run can be moved.
        """
        data = self.to_dict()
        data["paths"].pop("output_dir", None)
        canonical = json.dumps(data, sort_keys=True, default=str)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Config):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


__all__ = ["Config", "SECTIONS", "SubConfig"]
