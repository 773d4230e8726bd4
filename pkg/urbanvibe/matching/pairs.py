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
Per-unit discovery of high/low crime location pairs.
"""

import multiprocessing
from typing import List, Optional, Sequence

from urbanvibe.classes.enums import CrimeType, Study
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.geometry.index import SpatialIndex
from urbanvibe.ingest.classes import CrimeEvent, GeoUnit
from urbanvibe.logs import ulogger
from urbanvibe.matching.classes import LocationPair
from urbanvibe.matching.extremes import crime_index, locate_extreme_crime
from urbanvibe.settings.subconfig import MatchingConfig


# Crime index of the current worker process, set once by `_init_worker`.
_worker_index: Optional[SpatialIndex] = None


def _init_worker(index: SpatialIndex):
    global _worker_index
    _worker_index = index


def _pair_for_unit(
    unit: GeoUnit,
    crime_type: CrimeType,
    window: TimeWindow,
    config: MatchingConfig,
    study: Study,
    index: SpatialIndex = None,
) -> Optional[LocationPair]:
    extremes = locate_extreme_crime(
        unit,
        (),
        crime_type,
        window,
        radius=config.hilo_radius_m,
        grid_spacing=config.grid_spacing_m,
        min_separation=config.hilo_separation_m,
        index=index if index is not None else _worker_index,
    )
    if extremes is None:
        return None
    return LocationPair(
        unit.id,
        extremes.hi,
        extremes.lo,
        crime_type,
        window.name,
        extremes.separation_m,
        study=study,
        hi_count=extremes.hi_count,
        lo_count=extremes.lo_count,
    )


def find_high_low_pairs(
    units: Sequence[GeoUnit],
    crimes: Sequence[CrimeEvent],
    crime_type: CrimeType,
    window: TimeWindow,
    config: MatchingConfig,
    study: Study = Study.HIGH_LOW,
) -> List[LocationPair]:
    """
    The high/low pair of every unit that has one, ordered by unit id.

    Runs over `config.processes` worker processes when more than one; each
    worker receives the crime index once, when it starts.
    """
    units = sorted(units, key=lambda u: u.id)
    index = crime_index(crimes, crime_type, window)
    jobs = [(unit, crime_type, window, config, study) for unit in units]

    if config.processes > 1 and len(jobs) > 1:
        with multiprocessing.Pool(
            processes=config.processes, initializer=_init_worker, initargs=(index,)
        ) as pool:
            results = pool.starmap(_pair_for_unit, jobs)
    else:
        results = [_pair_for_unit(*job, index=index) for job in jobs]

    pairs = [pair for pair in results if pair is not None]
    ulogger.info(
        f"{study.value}: {len(pairs)} of {len(units)} units have a "
        f"{crime_type.value} pair in window {window.name}"
    )
    return pairs
