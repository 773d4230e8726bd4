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
# Urban vibrancy and crime analytics

UrbanVibe is a framework for studying how street-level activity relates to
crime in a city. It takes raw municipal datasets (census geography,
population and income, land lots, crime reports, property sales and
business listings from several sources), and outputs per-unit metrics,
robust excess-crime regressions and matched-pairs comparison tables.

Figures are left to external plotting: every stage writes plain CSVs.

# Quickstart

Generate a synthetic city and run the whole pipeline on it:

```bash
python -m urbanvibe synth --out ./urbanvibe-data/synth
python -m urbanvibe run --config ./urbanvibe-data/synth/config.yaml
```

Or from Python:

```python
from urbanvibe.defaults.city_configs import synth_city_config
from urbanvibe.funcs import cmd_synth, run_pipeline

cmd_synth(out_dir="./city")
config = synth_city_config("./city")
run_pipeline(config)
```

# Features

- pip installable
- Apache 2.0 Licensed
- Named, YAML-backed configs with command line overrides
- Stage outputs stamped with a config hash, so stale mixes are refused
- Deterministic synthetic cities with planted signals for testing

# Docs

- For Developers: `urbanvibe.docs.overviews.developers`
- For Urban Researchers: `urbanvibe.docs.overviews.researchers`

# Modules

- Geometry: `urbanvibe.geometry`
- Ingest: `urbanvibe.ingest`
- Metrics: `urbanvibe.metrics`
- Regression: `urbanvibe.regression`
- Matching: `urbanvibe.matching`
- Synthetic cities: `urbanvibe.synth`
"""
