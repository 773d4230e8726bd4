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
Metric: Poverty Index and Population Density

"""

from typing import Optional, Sequence

import numpy as np

from urbanvibe.ingest.classes import GeoUnit

DEFAULT_POVERTY_WEIGHTS = [1, 5 / 6, 4 / 6, 3 / 6, 2 / 6, 1 / 6, 0]

M2_PER_KM2 = 1e6


def poverty_index(
    brackets: Sequence[float],
    weights: Sequence[float] = None,
    tolerance: float = 1e-6,
) -> float:
    """
    Weighted sum of the income-to-poverty-line bracket proportions.

    The poorest bracket weighs 1 and the richest 0, so the index is in
    [0, 1].

    :param brackets: The 7 bracket proportions, poorest first.
    :param weights: The 7 weights. Defaults to linearly decreasing.
    :param tolerance: Allowed deviation of the bracket sum from 1.

    :return: The poverty index.

    :raises ValueError: If the brackets do not sum to 1.
    """
    weights = DEFAULT_POVERTY_WEIGHTS if weights is None else weights
    p = np.asarray(brackets, dtype=float)
    w = np.asarray(weights, dtype=float)

    if p.shape != (7,) or w.shape != (7,):
        raise ValueError("poverty_index needs 7 brackets and 7 weights")
    if abs(p.sum() - 1) > tolerance:
        raise ValueError(f"Poverty brackets sum to {p.sum()}, not 1")

    return float(np.clip(np.dot(w, p), 0.0, 1.0))


def population_density(unit: GeoUnit) -> Optional[float]:
    """
    Persons per square kilometre. None if the area or population is unknown.
    """
    if unit.population is None or not unit.area_m2 > 0:
        return None
    return unit.population / (unit.area_m2 / M2_PER_KM2)
