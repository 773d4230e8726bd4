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
All the Configuration-based Enums
"""


class Stage:
    """
    Pipeline stages. Each writes into its own output sub-directory.

    :attr OPTIONS: Stages in run order.
    """

    INGEST = "ingest"
    METRICS = "metrics"
    REGRESS = "regress"
    MATCH = "match"
    REPORT = "report"

    OPTIONS = [INGEST, METRICS, REGRESS, MATCH, REPORT]

    # Stages whose outputs a stage reads.
    UPSTREAM = {
        INGEST: [],
        METRICS: [INGEST],
        REGRESS: [INGEST, METRICS],
        MATCH: [INGEST, METRICS],
        REPORT: [INGEST, METRICS],
    }


class Outputs:
    """
    Output file names.
    """

    STAMP = "stamp.json"
    BUNDLE = "bundle.pkl.gz"
    INGEST_REPORT = "ingest_report.json"
    UNIT_METRICS = "unit_metrics_{level}.csv"
    BUSINESSES = "businesses.csv"
    CONSENSUS = "consensus_hours.csv"
    EXCESS = "excess_crime.csv"
    ASSOCIATION = "association.csv"
    FIT_LINES = "fit_lines.csv"
    HIGH_LOW = "high_low.csv"
    HIGH_LOW_LANDUSE = "high_low_landuse.csv"
    HOURS = "hours.csv"
    PAIRS = "pairs.csv"
    BUSINESS_COUNTS = "business_counts.csv"
    POPULATION_FILTER = "population_filter.csv"
    CRIME_CATEGORIES = "crime_categories.csv"
    UNIT_AREAS = "unit_areas.csv"
    CRIME_TIME_PROFILE = "crime_time_profile.csv"
    CRIME_HOUR_OF_WEEK = "crime_hour_of_week.csv"
    GROUND_TRUTH = "ground_truth.json"
