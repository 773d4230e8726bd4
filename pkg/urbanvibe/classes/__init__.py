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
Code for all the shared UrbanVibe Classes. This includes:

- Enums (unit levels, zoning, crime and business types)
- Weekly Schedules and Time Windows
- Errors and the per-file Load Report

All classes except `urbanvibe.classes.schedule.WeeklySchedule` are built to
act like structs rather than classes. This means they do not have complex
methods.
"""
