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
Utility functions for the UrbanVibe package.
"""

import json
import os
from datetime import datetime, timezone

import pandas as pd
from filelock import FileLock

from urbanvibe.classes.errors import DataValidationError, StageError
from urbanvibe.settings.enums import Outputs

URBANVIBE_DIR = os.path.dirname(os.path.realpath(__file__))

LOCK_TIMEOUT_S = 600


def require_file(path: str, name: str) -> str:
    """
    :raises DataValidationError: If the path is unset or does not exist.
    """
    if not path:
        raise DataValidationError(f"No path configured for {name}")
    if not os.path.exists(path):
        raise DataValidationError(f"{name} file not found: {path}")
    return path


def stage_dir(config, stage: str) -> str:
    return os.path.join(config.paths.output_dir, stage)


def stage_lock(config, stage: str) -> FileLock:
    """
    Lock guarding a stage's output directory.
    """
    directory = stage_dir(config, stage)
    os.makedirs(directory, exist_ok=True)
    return FileLock(os.path.join(directory, ".lock"), timeout=LOCK_TIMEOUT_S)


def write_stamp(config, stage: str):
    """
    Mark a stage as complete for this config.
    """
    stamp = {
        "stage": stage,
        "config_hash": config.config_hash(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with open(os.path.join(stage_dir(config, stage), Outputs.STAMP), "w") as f:
        json.dump(stamp, f, indent=2)


def check_stamp(config, stage: str):
    """
    Refuse to read a stage's outputs unless they exist and match this config.

    :raises StageError: If the stage is missing or stale.
    """
    path = os.path.join(stage_dir(config, stage), Outputs.STAMP)
    if not os.path.exists(path):
        raise StageError(f"Missing upstream stage '{stage}': run it first ({path})")

    with open(path, "r") as f:
        stamp = json.load(f)

    if stamp.get("config_hash") != config.config_hash():
        raise StageError(
            f"Stage '{stage}' was produced with a different config "
            f"({stamp.get('config_hash', '?')[:12]}); re-run it"
        )


def write_csv(df: pd.DataFrame, path: str):
    """
    Write a report CSV with full float precision and unix line endings.
    """
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
