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
Other general classes that are used in the project.
"""

from typing import Dict, List

from urbanvibe.classes.errors import DataValidationError
from urbanvibe.logs import ulogger


class LoadReport:
    """
    Class for storing problems as they occur while reading one input file.

    Problems can be line-dependent or not. Skipped records are counted so
    that the skip rate can be enforced once the file has been read.
    """

    def __init__(self, name: str):
        self.name = name
        self.read = 0
        self.skipped = 0
        self.errors: List[str] = []
        self.line_errors: Dict[int, List[str]] = {}

    def __str__(self) -> str:
        str_errors = self.errors.copy()

        for line_no, errors in sorted(self.line_errors.items()):
            str_errors.append(f"Line {line_no}: {', '.join(errors)}")

        return " ".join(str_errors)

    def append(self, error: str, line_no: int = None):
        """
        Append an error to the list of errors.

        :param error: Error to append.
        :param line_no: Line number the error occurred on. (If required)
        """
        if line_no is None:
            self.errors.append(error)
        else:
            self.line_errors.setdefault(line_no, []).append(error)

    def skip(self, reason: str, line_no: int = None):
        """
        Record a skipped record.

        :param reason: Why the record was skipped.
        :param line_no: The line (or feature) number of the record.
        """
        self.skipped += 1
        self.append(reason, line_no)
        where = f" line {line_no}" if line_no is not None else ""
        ulogger.warning(f"{self.name}{where}: skipped, {reason}")

    @property
    def skip_rate(self) -> float:
        if self.read == 0:
            return 0.0
        return self.skipped / self.read

    def check_skip_rate(self, limit: float):
        """
        Fail when too many records were skipped.

        :param limit: Largest acceptable fraction of skipped records.

        :raises DataValidationError: If the skip rate exceeds the limit.
        """
        if self.skip_rate > limit:
            raise DataValidationError(
                f"{self.name}: {self.skipped} of {self.read} records skipped "
                f"({self.skip_rate:.2%} > {limit:.2%}). {self}"
            )

    def to_dict(self) -> dict:
        return {
            "read": self.read,
            "skipped": self.skipped,
            "errors": list(self.errors),
            "line_errors": {str(k): v for k, v in sorted(self.line_errors.items())},
        }

    def __bool__(self):
        return len(self.errors) > 0 or len(self.line_errors) > 0
