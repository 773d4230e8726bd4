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
Exceptions raised by urbanvibe.

The CLI maps each family onto an exit code through `exit_code`.
"""

from typing import Iterable, List


class UrbanVibeError(Exception):
    """Base class for every urbanvibe error."""


class DataValidationError(UrbanVibeError, ValueError):
    """Input data is malformed, inconsistent or outside its allowed range."""


class GeometryError(DataValidationError):
    """A ring or polygon failed validation."""


class IdMismatchError(DataValidationError):
    """
    Identifiers failed to join across input files.

    :attr unmatched: The identifiers without a partner, sorted.
    """

    def __init__(self, message: str, unmatched: Iterable[str]):
        self.unmatched: List[str] = sorted(unmatched)
        preview = ", ".join(self.unmatched[:20])
        more = "" if len(self.unmatched) <= 20 else f" (+{len(self.unmatched) - 20})"
        super().__init__(f"{message}: {preview}{more}")


class NumericalError(UrbanVibeError):
    """
    A numerical routine could not produce a result.

    :attr columns: Names of the offending design matrix columns, if any.
    """

    def __init__(self, message: str, columns: Iterable[str] = ()):
        self.columns = list(columns)
        if self.columns:
            message = f"{message} (columns: {', '.join(self.columns)})"
        super().__init__(message)


class StageError(UrbanVibeError):
    """An upstream pipeline stage is missing or was run with another config."""


EXIT_CODES = {
    "success": 0,
    "usage": 1,
    "data_validation": 2,
    "numerical": 3,
}


def exit_code(error: BaseException) -> int:
    """
    Exit code of the CLI for an error that ended a command.
    """
    if isinstance(error, DataValidationError):
        return EXIT_CODES["data_validation"]
    if isinstance(error, NumericalError):
        return EXIT_CODES["numerical"]
    return EXIT_CODES["usage"]
