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
UrbanVibe

Please see the README.md for more information on how to use this package.

Sub-commands: ingest, metrics, regress, match, report, run, synth.
Exit codes: 0 success, 1 usage or stage error, 2 data validation,
3 numerical failure.
"""

import os
import sys
from typing import List, Union

import fire

from urbanvibe.classes.errors import (
    EXIT_CODES,
    DataValidationError,
    UrbanVibeError,
    exit_code,
)
from urbanvibe.defaults.city_configs import default_city
from urbanvibe.funcs import STAGE_FUNCS, cmd_synth, run_pipeline
from urbanvibe.logs import set_log_level, ulogger
from urbanvibe.settings.config import Config
from urbanvibe.settings.enums import Stage

LOCAL_DIR = os.getcwd()


def process_file_path(file_path: str, local_dir: str, name: str) -> str:
    """
    Process the file path.

    :param file_path: The file path.
    :param local_dir: The local directory.
    :param name: The name of the file path.

    :raises DataValidationError: If the file does not exist.
    """
    if not os.path.exists(file_path):
        raise DataValidationError(f"{name} does not exist: {file_path}")
    if file_path.startswith("./"):
        file_path = local_dir + file_path[1:]
    return file_path


def load_config(
    config: str = None, override: Union[str, List[str]] = None, output: str = None
) -> Config:
    """
    Resolve the config of a command.

    :param config: A YAML file, or the name of a registered config.
                   None uses the default city.
    :param override: One or more "section.key=value" overrides.
    :param output: Output directory, overriding paths.output_dir.
    """
    if config is None:
        loaded = default_city.get_copy()
    elif config in Config.configs:
        loaded = Config.get_config(config).get_copy()
    else:
        path = process_file_path(config, LOCAL_DIR, "config")
        loaded = Config.from_yaml(path, base=default_city)

    if isinstance(override, str):
        override = [override]
    overrides = list(override or [])
    if output:
        overrides.append(f"paths.output_dir={output}")
    loaded = loaded.apply_overrides(overrides)

    loaded.name = loaded.name or "cli"
    ulogger.info(f"Using config {loaded.name} ({loaded.config_hash()[:12]})")
    return loaded


def _stage_command(stage: str):
    def command(config: str = None, override=None, output: str = None):
        STAGE_FUNCS[stage](load_config(config, override, output))

    command.__name__ = stage
    command.__doc__ = (
        f"Run the {stage} stage.\n\n"
        ":param config: YAML config file or registered config name.\n"
        ":param override: section.key=value overrides.\n"
        ":param output: Output directory."
    )
    return command


def run_all(config: str = None, override=None, output: str = None):
    """
    Run every stage in order.

    :param config: YAML config file or registered config name.
    :param override: section.key=value overrides.
    :param output: Output directory.
    """
    run_pipeline(load_config(config, override, output))


def synth(
    spec: str = None, seed: int = None, out: str = None, config: str = None
):
    """
    Generate a synthetic city.

    :param spec: YAML synth spec. Falls back to synth.spec_file of the config,
                 then to the planted city.
    :param seed: Seed overriding the spec's.
    :param out: Output directory. Falls back to synth.out_dir of the config.
    :param config: YAML config file or registered config name.
    """
    synth_config = load_config(config).synth if config else None
    if synth_config is not None:
        spec = spec or synth_config.spec_file
        seed = synth_config.seed if seed is None else seed
        out = out or synth_config.out_dir
    cmd_synth(spec_file=spec, seed=seed, out_dir=out or "./urbanvibe-data/synth")


COMMANDS = {
    **{stage: _stage_command(stage) for stage in Stage.OPTIONS},
    "run": run_all,
    "synth": synth,
}


def run(argv: List[str] = None) -> int:
    """
    Entry point of the `urbanvibe` command.

    :return: The exit code.
    """
    set_log_level()
    try:
        fire.Fire(COMMANDS, command=argv)
    except fire.core.FireExit as e:
        return EXIT_CODES["success"] if not e.code else EXIT_CODES["usage"]
    except (UrbanVibeError, ValueError) as e:
        ulogger.error(str(e))
        return exit_code(e)
    return EXIT_CODES["success"]


if __name__ == "__main__":
    sys.exit(run())
