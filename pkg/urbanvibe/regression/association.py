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
Robust correlations between unit measures and (raw or excess) crime.

Population count and density are tested against raw crime counts; income
and poverty against the excess crime left by the population model; land
use against the excess crime left by the population, income and poverty
model. Income is also tested separately below and above a threshold.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from urbanvibe.classes.enums import CrimeType, ModelSpec
from urbanvibe.classes.errors import NumericalError
from urbanvibe.logs import ulogger
from urbanvibe.metrics.units import UnitMetrics
from urbanvibe.regression.excess import ExcessCrime
from urbanvibe.regression.huber import RegressionFit, huber_fit
from urbanvibe.settings.subconfig import RegressionConfig

ASSOCIATION_COLUMNS = [
    "predictor",
    "outcome",
    "outcome_kind",
    "subset",
    "r",
    "t",
    "n",
    "slope",
    "intercept",
    "converged",
    "flagged",
]

FIT_LINE_COLUMNS = ["predictor", "outcome", "subset", "x", "fitted", "lower", "upper"]

FIT_LINE_POINTS = 50

# predictor -> outcome source: None for raw counts, else the excess model.
PREDICTOR_OUTCOMES: Dict[str, Optional[ModelSpec]] = {
    "population": None,
    "population_density": None,
    "per_capita_income": ModelSpec.POP,
    "poverty": ModelSpec.POP,
    "vacant_prop": ModelSpec.POP_INCOME_POVERTY,
    "mixeduse_prop": ModelSpec.POP_INCOME_POVERTY,
    "comres_prop": ModelSpec.POP_INCOME_POVERTY,
}


def fit_line(
    fit: RegressionFit, grid: Sequence[float], confidence: float = 0.95
) -> pd.DataFrame:
    """
    Fitted line and pointwise confidence band of a single-predictor fit.

    The band uses cov = scale² (XᵀWX)⁻¹ at the final weights and a
    Student t quantile with n - 2 degrees of freedom.

    :return: Columns x, fitted, lower, upper.
    """
    x = np.asarray(grid, dtype=float)
    design = np.column_stack([np.ones(len(x)), x])
    fitted = design @ fit.coefficients[:2]
    variance = np.einsum("ij,jk,ik->i", design, fit.cov[:2, :2], design)
    se = np.sqrt(np.clip(variance, 0, None))
    q = stats.t.ppf((1 + confidence) / 2, max(fit.n - 2, 1))
    return pd.DataFrame(
        {"x": x, "fitted": fitted, "lower": fitted - q * se, "upper": fitted + q * se}
    )


def _outcome_values(
    units: Sequence[UnitMetrics],
    crime_type: CrimeType,
    source: Optional[ModelSpec],
    excess: Dict[ModelSpec, Dict[str, ExcessCrime]],
) -> List[Optional[float]]:
    if source is None:
        return [float(m.crimes(crime_type)) for m in units]
    by_id = excess.get(source, {})
    return [
        by_id[m.unit_id].excess(crime_type) if m.unit_id in by_id else None
        for m in units
    ]


Subset = Tuple[str, Callable[[UnitMetrics], bool]]


def _subsets(predictor: str, income_split: float) -> List[Subset]:
    subsets = [("all", lambda m: True)]
    if predictor == "per_capita_income":
        split = f"{income_split:g}"
        subsets += [
            (f"income<{split}", lambda m: m.per_capita_income < income_split),
            (f"income>={split}", lambda m: m.per_capita_income >= income_split),
        ]
    return subsets


def association_report(
    metrics: Sequence[UnitMetrics],
    excess: Dict[ModelSpec, Sequence[ExcessCrime]],
    config: RegressionConfig = None,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Robust correlation of every predictor with violent and non-violent crime.

    :param metrics: Unit metrics of the regression level.
    :param excess: Excess crime per model spec.
    :param config: Huber settings, minimum n and the income split.

    :return: The association table (one row per predictor, outcome and
             subset; rows with n below `min_n` are flagged) and the fitted
             lines with their confidence bands.
    """
    config = config or RegressionConfig()
    excess_by_id = {
        ModelSpec(spec): {e.unit_id: e for e in rows} for spec, rows in excess.items()
    }
    units = sorted((m for m in metrics if m.included), key=lambda m: m.unit_id)

    rows, lines = [], []
    for predictor, source in PREDICTOR_OUTCOMES.items():
        for crime_type in CrimeType.SUPERS():
            outcome_kind = "raw" if source is None else f"excess[{source.value}]"
            y_all = _outcome_values(units, crime_type, source, excess_by_id)

            for subset, keep in _subsets(predictor, config.income_split):
                pairs = [
                    (getattr(m, predictor), y)
                    for m, y in zip(units, y_all)
                    if getattr(m, predictor) is not None and y is not None and keep(m)
                ]
                x = np.array([p[0] for p in pairs], dtype=float)
                y = np.array([p[1] for p in pairs], dtype=float)

                row = {
                    "predictor": predictor,
                    "outcome": crime_type.value,
                    "outcome_kind": outcome_kind,
                    "subset": subset,
                    "r": np.nan,
                    "t": np.nan,
                    "n": len(pairs),
                    "slope": np.nan,
                    "intercept": np.nan,
                    "converged": False,
                    "flagged": len(pairs) < config.min_n,
                }

                try:
                    fit = huber_fit(
                        x,
                        y,
                        [predictor],
                        t=config.huber_t,
                        tol=config.tol,
                        max_iter=config.max_iter,
                    )
                except NumericalError as e:
                    ulogger.warning(
                        f"No fit for {predictor} vs {crime_type.value} ({subset}): {e}"
                    )
                    row["flagged"] = True
                    rows.append(row)
                    continue

                row.update(
                    r=fit.r,
                    t=fit.t,
                    slope=fit.slope,
                    intercept=fit.intercept,
                    converged=fit.converged,
                )
                rows.append(row)

                grid = np.linspace(x.min(), x.max(), FIT_LINE_POINTS)
                line = fit_line(fit, grid, config.confidence)
                line.insert(0, "subset", subset)
                line.insert(0, "outcome", crime_type.value)
                line.insert(0, "predictor", predictor)
                lines.append(line)

    report = pd.DataFrame(rows, columns=ASSOCIATION_COLUMNS)
    fit_lines = (
        pd.concat(lines, ignore_index=True)
        if lines
        else pd.DataFrame(columns=FIT_LINE_COLUMNS)
    )
    return report, fit_lines
