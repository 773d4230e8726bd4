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
Excess crime: the residual crime count of a unit once population (and
optionally income and poverty) has been regressed out robustly.
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import CrimeType, ModelSpec
from urbanvibe.logs import ulogger
from urbanvibe.metrics.units import UnitMetrics
from urbanvibe.regression.huber import RegressionFit, huber_fit

EXCESS_COLUMNS = ["unit_id", "spec", "excess_violent", "excess_nonviolent"]


class ExcessCrime:
    """
    Robust regression residuals of one unit's violent and non-violent counts.
    """

    __slots__ = ("unit_id", "excess_violent", "excess_nonviolent", "spec")

    def __init__(
        self,
        unit_id: str,
        excess_violent: float,
        excess_nonviolent: float,
        spec: ModelSpec,
    ):
        self.unit_id = unit_id
        self.excess_violent = excess_violent
        self.excess_nonviolent = excess_nonviolent
        self.spec = ModelSpec(spec)

    def excess(self, crime_type: CrimeType) -> float:
        if crime_type == CrimeType.VIOLENT:
            return self.excess_violent
        if crime_type == CrimeType.NON_VIOLENT:
            return self.excess_nonviolent
        raise ValueError(f"No excess crime for {crime_type}")

    def to_dict(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "spec": self.spec.value,
            "excess_violent": self.excess_violent,
            "excess_nonviolent": self.excess_nonviolent,
        }


def regression_units(
    metrics: Sequence[UnitMetrics], spec: ModelSpec
) -> List[UnitMetrics]:
    """
    The units a model can use: passing the population filter and with
    every predictor of the spec present. Dropped units are logged.
    """
    spec = ModelSpec(spec)
    usable = []
    missing = 0
    for m in metrics:
        if not m.included:
            continue
        if any(getattr(m, name) is None for name in spec.predictors()):
            missing += 1
            continue
        usable.append(m)

    if missing:
        ulogger.warning(
            f"{missing} units lack a predictor of the '{spec.value}' model "
            "and were left out"
        )
    return sorted(usable, key=lambda m: m.unit_id)


def fit_crime_models(
    metrics: Sequence[UnitMetrics],
    spec: ModelSpec = ModelSpec.POP,
    t: float = 1.345,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> Tuple[List[UnitMetrics], Dict[CrimeType, RegressionFit]]:
    """
    Fit the violent and non-violent count models of a spec.

    :return: The units used, in fit row order, and one fit per crime type.

    :raises NumericalError: Propagated from `huber_fit`.
    """
    spec = ModelSpec(spec)
    units = regression_units(metrics, spec)
    predictors = spec.predictors()
    X = np.array([[getattr(m, p) for p in predictors] for m in units], dtype=float)
    X = X.reshape(len(units), len(predictors))

    fits = {}
    for crime_type in CrimeType.SUPERS():
        y = np.array([m.crimes(crime_type) for m in units], dtype=float)
        fits[crime_type] = huber_fit(X, y, predictors, t=t, tol=tol, max_iter=max_iter)
        ulogger.info(f"{crime_type.value} ~ {spec.value}: {fits[crime_type]}")

    return units, fits


def excess_crime(
    metrics: Sequence[UnitMetrics],
    spec: ModelSpec = ModelSpec.POP,
    t: float = 1.345,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> List[ExcessCrime]:
    """
    Excess violent and non-violent crime of every usable unit.

    Units failing the population filter get no row.

    :param metrics: Unit metrics of one level.
    :param spec: Predictor set.
    :param t: Huber tuning constant.
    :param tol: IRLS tolerance.
    :param max_iter: IRLS iteration limit.

    :return: One ExcessCrime per unit used, sorted by unit id.
    """
    units, fits = fit_crime_models(metrics, spec, t=t, tol=tol, max_iter=max_iter)
    violent = fits[CrimeType.VIOLENT].residuals
    non_violent = fits[CrimeType.NON_VIOLENT].residuals

    return [
        ExcessCrime(m.unit_id, float(v), float(nv), spec)
        for m, v, nv in zip(units, violent, non_violent)
    ]


def excess_frame(excess: Sequence[ExcessCrime]) -> pd.DataFrame:
    return pd.DataFrame([e.to_dict() for e in excess], columns=EXCESS_COLUMNS)
