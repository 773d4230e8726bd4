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

import pytest

from urbanvibe.defaults.city_configs import synth_city_config
from urbanvibe.funcs import (
    cmd_ingest,
    cmd_match,
    cmd_metrics,
    cmd_regress,
    cmd_report,
)
from urbanvibe.synth.classes import null_city, planted_city
from urbanvibe.synth.generate import generate


@pytest.fixture(scope="session")
def planted_dir(tmp_path_factory, values_synth):
    out_dir = tmp_path_factory.mktemp("planted")
    generate(planted_city(seed=values_synth["planted_seed"]), str(out_dir))
    return str(out_dir)


@pytest.fixture(scope="session")
def planted_run(planted_dir):
    """
    Every stage of the pipeline, run once on the planted city.
    """
    config = synth_city_config(planted_dir, name="planted_city")
    bundle = cmd_ingest(config)
    metrics = cmd_metrics(config)
    excess, association = cmd_regress(config)
    tables = cmd_match(config)
    reports = cmd_report(config)
    return {
        "config": config,
        "bundle": bundle,
        "metrics": metrics,
        "excess": excess,
        "association": association,
        "tables": tables,
        "reports": reports,
    }


@pytest.fixture(scope="session")
def null_run(tmp_path_factory, values_synth):
    """
    Ingest, metrics, regressions and matched pairs on the null city.
    """
    out_dir = str(tmp_path_factory.mktemp("null"))
    generate(null_city(seed=values_synth["null_seed"]), out_dir)
    config = synth_city_config(out_dir, name="null_city")
    cmd_ingest(config)
    cmd_metrics(config)
    excess, association = cmd_regress(config)
    tables = cmd_match(config)
    return {
        "config": config,
        "excess": excess,
        "association": association,
        "tables": tables,
    }


@pytest.fixture(scope="session")
def null_replicates(tmp_path_factory, values_synth):
    """
    Matched pairs tables from small null cities, one per seed.
    """
    runs = []
    for k in range(values_synth["null_replicates"]):
        grid_size = values_synth["null_replicate_grid"]
        spec = null_city(seed=values_synth["null_seed"] + 1 + k)
        spec = spec.model_copy(update={"grid_size": grid_size})
        out_dir = str(tmp_path_factory.mktemp(f"null_{k}"))
        generate(spec, out_dir)
        config = synth_city_config(out_dir, name=f"null_city_{k}")
        cmd_ingest(config)
        cmd_metrics(config)
        cmd_regress(config)
        runs.append({"config": config, "tables": cmd_match(config)})
    return runs
