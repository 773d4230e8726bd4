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
Contains the high-level functions that are used to run the UrbanVibe pipeline.

Every stage reads its upstream outputs from `<output_dir>/<stage>/`, checks
that they were produced with the same config, and writes its own outputs
under a lock before stamping the directory.
"""

import json
import os
import time
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from urbanvibe.classes.enums import BusinessType, CrimeCategory, ModelSpec, UnitLevel
from urbanvibe.defaults.city_configs import synth_city_config
from urbanvibe.ingest.bundle import build_bundle
from urbanvibe.ingest.classes import DatasetBundle
from urbanvibe.ingest.geounits import population_filter_summary
from urbanvibe.logs import log_timings, ulogger
from urbanvibe.matching.classes import PAIR_COLUMNS, REPORT_COLUMNS
from urbanvibe.matching.high_low import study_high_low
from urbanvibe.matching.hours import study_hours
from urbanvibe.metrics.hours import (
    business_hours_table,
    consensus_frame,
    consensus_table,
)
from urbanvibe.metrics.units import (
    UnitMetrics,
    compute_unit_metrics,
    crime_time_profile,
    unit_metrics_frame,
)
from urbanvibe.regression.association import association_report
from urbanvibe.regression.excess import excess_crime, excess_frame
from urbanvibe.settings.config import Config
from urbanvibe.settings.enums import Outputs, Stage
from urbanvibe.synth.classes import SynthSpec, load_synth_spec, planted_city
from urbanvibe.synth.generate import generate
from urbanvibe.utils import (
    check_stamp,
    stage_dir,
    stage_lock,
    write_csv,
    write_stamp,
)

M2_PER_KM2 = 1e6
M2_PER_MI2 = 2_589_988.110336
SYNTH_CONFIG = "config.yaml"

ConfigLike = Union[Config, str]


def _output(config: Config, stage: str, name: str) -> str:
    return os.path.join(stage_dir(config, stage), name)


def check_upstream(config: Config, stage: str):
    """
    :raises StageError: If any stage this one reads is missing or stale.
    """
    for upstream in Stage.UPSTREAM[stage]:
        check_stamp(config, upstream)


def load_bundle(config: ConfigLike) -> DatasetBundle:
    """
    Load the ingested datasets of a config.

    :raises StageError: If ingest has not been run with this config.
    """
    config = Config.get_config(config)
    check_stamp(config, Stage.INGEST)
    return DatasetBundle.load(_output(config, Stage.INGEST, Outputs.BUNDLE))


def load_unit_metrics(config: ConfigLike, level: UnitLevel) -> List[UnitMetrics]:
    """
    Read back the unit metrics of one level.

    :raises StageError: If metrics have not been run with this config.
    """
    config = Config.get_config(config)
    check_stamp(config, Stage.METRICS)
    level = UnitLevel(level)
    name = Outputs.UNIT_METRICS.format(level=level.value)
    df = pd.read_csv(_output(config, Stage.METRICS, name), dtype={"unit_id": str})
    df = df.astype(object).where(df.notna(), None)
    return [UnitMetrics.from_dict(row) for row in df.to_dict(orient="records")]


def cmd_ingest(config: ConfigLike) -> DatasetBundle:
    """
    Load, validate and deduplicate the input datasets.

    Writes bundle.pkl.gz and ingest_report.json.

    :param config: The config (or its registered name).

    :return: The dataset bundle.

    :raises DataValidationError: If an input is missing or malformed.
    """
    config = Config.get_config(config)
    bundle = build_bundle(config)

    with stage_lock(config, Stage.INGEST):
        bundle.save(_output(config, Stage.INGEST, Outputs.BUNDLE))
        with open(_output(config, Stage.INGEST, Outputs.INGEST_REPORT), "w") as f:
            json.dump(bundle.report, f, indent=2, sort_keys=True)
        write_stamp(config, Stage.INGEST)

    return bundle


def cmd_metrics(config: ConfigLike) -> Dict[UnitLevel, List[UnitMetrics]]:
    """
    Compute the per-unit metrics and the business hours tables.

    Writes unit_metrics_<level>.csv, businesses.csv and consensus_hours.csv.

    :return: The unit metrics of each level.
    """
    config = Config.get_config(config)
    check_upstream(config, Stage.METRICS)
    bundle = load_bundle(config)
    windows = config.windows.get_windows()

    metrics = compute_unit_metrics(
        bundle.units, bundle.lots, bundle.crimes, config.metrics.poverty_weights
    )
    by_level = {
        level: [m for m in metrics if m.level == level] for level in UnitLevel
    }

    consensus = consensus_table(bundle.businesses, windows)
    with stage_lock(config, Stage.METRICS):
        for level, at_level in by_level.items():
            name = Outputs.UNIT_METRICS.format(level=level.value)
            write_csv(
                unit_metrics_frame(at_level), _output(config, Stage.METRICS, name)
            )
        write_csv(
            business_hours_table(bundle.businesses, windows),
            _output(config, Stage.METRICS, Outputs.BUSINESSES),
        )
        write_csv(
            consensus_frame(consensus, bundle.businesses),
            _output(config, Stage.METRICS, Outputs.CONSENSUS),
        )
        write_stamp(config, Stage.METRICS)

    return by_level


def cmd_regress(config: ConfigLike) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Fit the excess crime models and the predictor associations.

    Writes excess_crime.csv, association.csv and fit_lines.csv.

    :return: The excess crime and association tables.

    :raises NumericalError: If a model's design matrix is rank deficient.
    """
    config = Config.get_config(config)
    check_upstream(config, Stage.REGRESS)
    reg = config.regression
    metrics = load_unit_metrics(config, reg.level)

    excess = {
        spec: excess_crime(
            metrics, spec, t=reg.huber_t, tol=reg.tol, max_iter=reg.max_iter
        )
        for spec in ModelSpec
    }
    report, lines = association_report(metrics, excess, reg)
    excess_df = pd.concat(
        [excess_frame(excess[spec]) for spec in ModelSpec], ignore_index=True
    )

    with stage_lock(config, Stage.REGRESS):
        write_csv(excess_df, _output(config, Stage.REGRESS, Outputs.EXCESS))
        write_csv(report, _output(config, Stage.REGRESS, Outputs.ASSOCIATION))
        write_csv(lines, _output(config, Stage.REGRESS, Outputs.FIT_LINES))
        write_stamp(config, Stage.REGRESS)

    flagged = int(report["flagged"].sum()) if len(report) else 0
    ulogger.info(
        f"Regressions at level {reg.level.value}: {len(metrics)} units, "
        f"{len(report)} association rows ({flagged} flagged)"
    )
    return excess_df, report


def _report_frame(cells) -> pd.DataFrame:
    return pd.DataFrame([c.to_dict() for c in cells], columns=REPORT_COLUMNS)


def cmd_match(config: ConfigLike) -> Dict[str, pd.DataFrame]:
    """
    Run the high/low crime and open hours matched pairs studies.

    Writes high_low.csv, high_low_landuse.csv, hours.csv and pairs.csv.

    :return: The four tables, keyed by file name.
    """
    config = Config.get_config(config)
    check_upstream(config, Stage.MATCH)
    bundle = load_bundle(config)
    windows = config.windows.get_windows()
    timings = {}

    start = time.time()
    business_cells, landuse_cells, hilo_pairs = study_high_low(
        bundle.units,
        bundle.crimes,
        bundle.businesses,
        bundle.properties,
        bundle.lots,
        windows,
        config.matching,
        ingest_date=bundle.ingest_date,
        tenure_radius=config.metrics.tenure_radius_m,
    )
    timings["high_low"] = time.time() - start

    start = time.time()
    hours_cells, hours_pairs = study_hours(
        bundle.units, bundle.crimes, bundle.businesses, windows, config.matching
    )
    timings["hours"] = time.time() - start

    tables = {
        Outputs.HIGH_LOW: _report_frame(business_cells),
        Outputs.HIGH_LOW_LANDUSE: _report_frame(landuse_cells),
        Outputs.HOURS: _report_frame(hours_cells),
        Outputs.PAIRS: pd.DataFrame(
            [p.to_dict() for p in hilo_pairs + hours_pairs], columns=PAIR_COLUMNS
        ),
    }

    with stage_lock(config, Stage.MATCH):
        for name, df in tables.items():
            write_csv(df, _output(config, Stage.MATCH, name))
        write_stamp(config, Stage.MATCH)

    log_timings(timings, title="Matching timings:")
    for name in (Outputs.HIGH_LOW, Outputs.HIGH_LOW_LANDUSE, Outputs.HOURS):
        df = tables[name]
        ulogger.info(
            f"{name}: {len(df)} cells, {int(df['significant'].sum())} significant"
        )
    return tables


def business_counts(bundle: DatasetBundle) -> pd.DataFrame:
    """
    Listings per source, the deduplicated union, and businesses per type.

    Columns: group, name, total, with_hours.
    """
    rows = []
    for source, counts in sorted(bundle.listing_counts.items()):
        group = "union" if source == "union" else "source"
        rows.append({"group": group, "name": source, **counts})

    for business_type in BusinessType.ALL():
        of_type = [b for b in bundle.businesses if business_type in b.types]
        rows.append(
            {
                "group": "type",
                "name": business_type.value,
                "total": len(of_type),
                "with_hours": sum(b.has_hours for b in of_type),
            }
        )

    order = {"source": 0, "union": 1, "type": 2}
    rows.sort(key=lambda r: order[r["group"]])
    return pd.DataFrame(rows, columns=["group", "name", "total", "with_hours"])


def crime_categories(bundle: DatasetBundle) -> pd.DataFrame:
    """
    Count and relative frequency of every crime category.
    """
    total = len(bundle.crimes)
    rows = []
    for category in CrimeCategory:
        count = sum(1 for c in bundle.crimes if c.category == category)
        rows.append(
            {
                "category": category.value,
                "crime_type": category.super.value,
                "count": count,
                "share": count / total if total else None,
            }
        )
    return pd.DataFrame(rows, columns=["category", "crime_type", "count", "share"])


def unit_areas(bundle: DatasetBundle) -> pd.DataFrame:
    """
    Mean, median and sd of the areas of units passing the population
    filter, per level, in square kilometers and square miles.
    """
    rows = []
    for level in UnitLevel:
        areas = np.array(
            [u.area_m2 for u in bundle.units_at(level) if u.included], dtype=float
        )
        row = {"level": level.value, "n": len(areas)}
        for unit, per in (("km2", M2_PER_KM2), ("mi2", M2_PER_MI2)):
            scaled = areas / per
            n = len(scaled)
            row[f"mean_{unit}"] = float(np.mean(scaled)) if n else None
            row[f"median_{unit}"] = float(np.median(scaled)) if n else None
            row[f"sd_{unit}"] = float(np.std(scaled, ddof=1)) if n > 1 else None
        rows.append(row)
    return pd.DataFrame(rows)


def cmd_report(config: ConfigLike) -> Dict[str, pd.DataFrame]:
    """
    Write the summary tables describing the ingested city.

    Writes business_counts.csv, population_filter.csv, crime_categories.csv,
    unit_areas.csv, crime_time_profile.csv and crime_hour_of_week.csv.

    :return: The tables, keyed by file name.
    """
    config = Config.get_config(config)
    check_upstream(config, Stage.REPORT)
    bundle = load_bundle(config)

    profile, hour_of_week = crime_time_profile(
        bundle.crimes, config.windows.get_windows()
    )
    tables = {
        Outputs.BUSINESS_COUNTS: business_counts(bundle),
        Outputs.POPULATION_FILTER: pd.DataFrame(
            population_filter_summary(bundle.units)
        ),
        Outputs.CRIME_CATEGORIES: crime_categories(bundle),
        Outputs.UNIT_AREAS: unit_areas(bundle),
        Outputs.CRIME_TIME_PROFILE: profile,
        Outputs.CRIME_HOUR_OF_WEEK: hour_of_week,
    }

    with stage_lock(config, Stage.REPORT):
        for name, df in tables.items():
            write_csv(df, _output(config, Stage.REPORT, name))
        write_stamp(config, Stage.REPORT)

    return tables


def cmd_synth(
    spec_file: str = None, seed: int = None, out_dir: str = "./urbanvibe-data/synth"
) -> dict:
    """
    Generate a synthetic city, plus a config.yaml that points at it.

    :param spec_file: YAML synth spec. None uses the planted city.
    :param seed: Overrides the spec's seed.
    :param out_dir: Where the files are written.

    :return: The ground truth.
    """
    spec: SynthSpec = load_synth_spec(spec_file) if spec_file else planted_city()
    if seed is not None:
        spec = spec.model_copy(update={"seed": int(seed)})
    truth = generate(spec, out_dir)

    city = synth_city_config(os.path.abspath(out_dir))
    city.to_yaml(os.path.join(out_dir, SYNTH_CONFIG))
    return truth


STAGE_FUNCS = {
    Stage.INGEST: cmd_ingest,
    Stage.METRICS: cmd_metrics,
    Stage.REGRESS: cmd_regress,
    Stage.MATCH: cmd_match,
    Stage.REPORT: cmd_report,
}


def run_pipeline(config: ConfigLike, stages: List[str] = None):
    """
    Run stages in order, all of them by default.

    :param config: The config (or its registered name).
    :param stages: Stage names to run.
    """
    config = Config.get_config(config)
    timings = {}
    for stage in stages or Stage.OPTIONS:
        start = time.time()
        STAGE_FUNCS[stage](config)
        timings[stage] = time.time() - start
    log_timings(timings, title="Pipeline timings:")
