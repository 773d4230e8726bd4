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
Adds the Apache 2.0 notice to the top of every Python file.

    python tools/license.py                 # add it where missing
    python tools/license.py --check=True    # list files without it, exit 1
"""

import os
import sys
from typing import List

import fire

LICENSE_NOTICE = """# Copyright 2024 Adam McArthur
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

TARGET_DIRS = ["./urbanvibe", "./tests", "./tools"]


def python_files(directories: List[str]) -> List[str]:
    found = []
    for directory in directories:
        if not os.path.isdir(directory):
            print(f"Invalid directory: {directory}")
            continue
        for root, _, files in os.walk(directory):
            found.extend(os.path.join(root, f) for f in files if f.endswith(".py"))
    return sorted(found)


def has_license(filepath: str) -> bool:
    with open(filepath, "r") as f:
        return f.read().startswith(LICENSE_NOTICE.strip())


def add_license(directories: List[str] = None, check: bool = False):
    """
    :param directories: Where to look. Defaults to the package, tests and tools.
    :param check: Only report files missing the notice.
    """
    files = python_files(directories or TARGET_DIRS)
    missing = [f for f in files if not has_license(f)]

    if check:
        for filepath in missing:
            print(f"License missing in {filepath}")
        sys.exit(1 if missing else 0)

    for filepath in missing:
        with open(filepath, "r") as f:
            content = f.read()
        with open(filepath, "w") as f:
            f.write(LICENSE_NOTICE + "\n" + content)
        print(f"License added to {filepath}.")


if __name__ == "__main__":
    fire.Fire(add_license)
