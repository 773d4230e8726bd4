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
UrbanVibe's config system lets an entire set of configuration be referred to
by a single name. This is useful when you analyse several cities, or several
variants of the same study, and want to switch between them easily.

Configs can also be written to and read from YAML, and single keys can be
overridden from the command line, e.g. `--override matching.alpha=0.01`.
"""
