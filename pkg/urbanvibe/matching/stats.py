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
Paired t tests and the Bonferroni correction.
"""

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from urbanvibe.matching.classes import MatchedPairReport


class PairedT(NamedTuple):
    mean: float
    t: float
    p: float
    degenerate: bool


def paired_t(d: Sequence[float]) -> PairedT:
    """
    Matched pairs t statistic of a list of differences.

    t = mean(d) / (sd(d) / √n) with the n - 1 standard deviation; p is
    two-sided from Student's t with n - 1 degrees of freedom. With zero
    spread, t is ±inf (p = 0, degenerate) for a non-zero mean and 0 (p = 1)
    otherwise.

    :raises ValueError: If there are fewer than 2 differences.
    """
    d = np.asarray(d, dtype=float)
    n = len(d)
    if n < 2:
        raise ValueError(f"paired_t needs at least 2 differences, got {n}")

    mean = float(d.mean())
    sd = float(d.std(ddof=1))

    if sd == 0:
        if mean == 0:
            return PairedT(0.0, 0.0, 1.0, False)
        return PairedT(mean, float(np.sign(mean) * np.inf), 0.0, True)

    t = mean / (sd / np.sqrt(n))
    p = float(2 * stats.t.sf(abs(t), df=n - 1))
    return PairedT(mean, float(t), p, False)


def bonferroni(
    raw_p: Sequence[Optional[float]], alpha: float = 0.05
) -> Tuple[List[bool], int]:
    """
    Bonferroni significance flags.

    :param raw_p: Raw p values. None marks an untested cell, which is
                  neither counted in m nor flagged.
    :param alpha: Family-wise level.

    :return: One flag per p (p < alpha / m) and the family size m.
    """
    m = sum(p is not None for p in raw_p)
    if m == 0:
        return [False] * len(raw_p), 0
    threshold = alpha / m
    return [p is not None and p < threshold for p in raw_p], m


def cell_report(
    study, measure: str, crime_type, window: str, differences: Sequence[float]
) -> MatchedPairReport:
    """
    An (unadjusted) table cell from the differences of its valid pairs.
    """
    n = len(differences)
    if n == 0:
        return MatchedPairReport(study, measure, crime_type, window, 0, None)
    if n < 2:
        return MatchedPairReport(
            study, measure, crime_type, window, n, float(np.mean(differences))
        )

    result = paired_t(differences)
    return MatchedPairReport(
        study,
        measure,
        crime_type,
        window,
        n,
        result.mean,
        result.t,
        result.p,
        degenerate=result.degenerate,
    )


def adjust_family(
    reports: Sequence[MatchedPairReport], alpha: float = 0.05
) -> List[MatchedPairReport]:
    """
    Set m and the significance flag of every cell of one emitted table.
    """
    flags, m = bonferroni([r.p_raw for r in reports], alpha)
    for report, flag in zip(reports, flags):
        report.m = m
        report.significant = flag
    return list(reports)
