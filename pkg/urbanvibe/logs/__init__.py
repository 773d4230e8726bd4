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
Logging utilities for the project.

Verbosity is read from the `URBANVIBE_LOG_LEVEL` environment variable.
"""

import logging
import os
from typing import Dict

MS_CONVERSION_FACTOR = 1000
LOG_LEVEL_ENV = "URBANVIBE_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

ulogger = logging.getLogger("urbanvibe")


def set_log_level(level: str = None) -> int:
    """
    Set the verbosity of the urbanvibe logger.

    :param level: A logging level name. Falls back to the environment
                  variable, then to INFO.

    :return: The numeric level that was applied.
    """
    level = (level or os.environ.get(LOG_LEVEL_ENV) or "INFO").upper()
    numeric = logging.getLevelName(level)

    if not isinstance(numeric, int):
        ulogger.warning(f"Unknown log level {level}, using INFO.")
        numeric = logging.INFO

    # check if logger exists
    if not ulogger.hasHandlers():
        logging.basicConfig(format=LOG_FORMAT)

    ulogger.setLevel(numeric)
    return numeric


def log_timings(timings: Dict[str, float], title: str = None):
    """
    Log the wall-clock time of each pipeline stage.

    :param timings: Mapping of stage name to seconds taken.
    :param title: Title of the log line.
    """
    if title is None:
        title = "Speed:"

    if not timings:
        ulogger.info(f"{title} No timings to log.")
        return

    total_time = sum(timings.values())
    slowest = max(timings, key=timings.get)
    ulogger.info(
        f"{title} {total_time:.2f} s total, "
        f"{total_time * MS_CONVERSION_FACTOR / len(timings):.2f} ms per step. "
        f"Slowest: {slowest} ({timings[slowest] * MS_CONVERSION_FACTOR:.2f} ms)"
    )
