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
Metric: Consensus and Excess Open Hours

The consensus of a business type is the mean number of open hours of the
businesses of that type that have a schedule. A business's excess hours
are its own hours minus that consensus. Both can be taken over the whole
week or only within a time window; within a window the consensus is
recomputed over the window.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import BusinessType
from urbanvibe.classes.schedule import TimeWindow
from urbanvibe.ingest.classes import Business

ConsensusTable = Dict[Tuple[BusinessType, str], Optional[float]]


def consensus_hours(
    businesses: Sequence[Business],
    business_type: BusinessType,
    window: TimeWindow = None,
) -> Optional[float]:
    """
    Mean open hours within a window over the businesses of a type with hours.

    :param businesses: All businesses.
    :param business_type: The type.
    :param window: The window. None is the whole week.

    :return: The consensus, None if no business of the type has hours.
    """
    hours = [
        b.schedule.hours_in(window)
        for b in businesses
        if business_type in b.types and b.schedule is not None
    ]
    if not hours:
        return None
    return float(np.mean(hours))


def excess_hours(
    business: Business, consensus: Optional[float], window: TimeWindow = None
) -> Optional[float]:
    """
    A business's open hours within a window minus the consensus.

    :return: The excess, negative when open less than the consensus.
             None without a schedule or consensus.
    """
    if business.schedule is None or consensus is None:
        return None
    return business.schedule.hours_in(window) - consensus


def consensus_table(
    businesses: Sequence[Business], windows: Sequence[TimeWindow]
) -> ConsensusTable:
    """
    The consensus of every business type in every window.
    """
    return {
        (business_type, window.name): consensus_hours(
            businesses, business_type, window
        )
        for business_type in BusinessType.ALL()
        for window in windows
    }


def business_hours_table(
    businesses: Sequence[Business], windows: Sequence[TimeWindow]
) -> pd.DataFrame:
    """
    One row per (business, type, window) for businesses with hours.

    Columns: business_id, business_type, window, hours, consensus,
    excess_hours. Rows are sorted by business, type and window.
    """
    consensus = consensus_table(businesses, windows)

    rows: List[dict] = []
    for business in sorted(businesses, key=lambda b: b.id):
        if business.schedule is None:
            continue
        for business_type in sorted(business.types, key=lambda t: t.value):
            for window in windows:
                c = consensus[(business_type, window.name)]
                rows.append(
                    {
                        "business_id": business.id,
                        "business_type": business_type.value,
                        "window": window.name,
                        "hours": business.schedule.hours_in(window),
                        "consensus": c,
                        "excess_hours": excess_hours(business, c, window),
                    }
                )

    return pd.DataFrame(
        rows,
        columns=[
            "business_id",
            "business_type",
            "window",
            "hours",
            "consensus",
            "excess_hours",
        ],
    )


def consensus_frame(
    consensus: ConsensusTable, businesses: Sequence[Business]
) -> pd.DataFrame:
    """
    The consensus table as rows of (business_type, window, n_with_hours, consensus).
    """
    with_hours = {
        t: sum(1 for b in businesses if t in b.types and b.schedule is not None)
        for t in BusinessType.ALL()
    }
    rows = [
        {
            "business_type": business_type.value,
            "window": window,
            "n_with_hours": with_hours[business_type],
            "consensus": value,
        }
        for (business_type, window), value in sorted(
            consensus.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
        )
    ]
    return pd.DataFrame(
        rows, columns=["business_type", "window", "n_with_hours", "consensus"]
    )
