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
Enums for the domain model: geographic levels, zoning, crime and business types.
"""

from enum import Enum
from typing import List


class UnitLevel(str, Enum):
    """
    The two nested census geographies.
    """

    BLOCK = "block"
    BLOCK_GROUP = "block_group"

    def __str__(self):
        return self.value


class Zoning(str, Enum):
    """
    Land use designations, after merging the municipal sub-categories.
    """

    COMMERCIAL = "commercial"
    RESIDENTIAL = "residential"
    MIXED_USE = "mixed_use"
    INDUSTRIAL = "industrial"
    VACANT = "vacant"
    TRANSPORTATION = "transportation"
    WATER = "water"
    PARK = "park"
    CIVIC = "civic"
    RECREATION = "recreation"
    CULTURE = "culture"
    CEMETERY = "cemetery"

    def __str__(self):
        return self.value


class CrimeType(str, Enum):
    """
    Crime super-categories. ALL is the union used by the hours study.
    """

    VIOLENT = "violent"
    NON_VIOLENT = "non_violent"
    ALL = "all"

    @classmethod
    def SUPERS(cls) -> List["CrimeType"]:
        return [cls.VIOLENT, cls.NON_VIOLENT]

    def matches(self, super_category: "CrimeType") -> bool:
        return self == CrimeType.ALL or self == super_category

    def __str__(self):
        return self.value


class CrimeCategory(str, Enum):
    """
    The ten crime categories.
    """

    HOMICIDE = "Homicide"
    SEXUAL = "Sexual"
    ROBBERY = "Robbery"
    ASSAULT = "Assault"
    BURGLARY = "Burglary"
    THEFT = "Theft"
    MOTOR_THEFT = "Motor Theft"
    ARSON = "Arson"
    VANDALISM = "Vandalism"
    DISORDERLY_CONDUCT = "Disorderly Conduct"

    @classmethod
    def VIOLENT(cls) -> List["CrimeCategory"]:
        return [cls.HOMICIDE, cls.SEXUAL, cls.ROBBERY, cls.ASSAULT]

    @classmethod
    def NON_VIOLENT(cls) -> List["CrimeCategory"]:
        return [
            cls.BURGLARY,
            cls.THEFT,
            cls.MOTOR_THEFT,
            cls.ARSON,
            cls.VANDALISM,
            cls.DISORDERLY_CONDUCT,
        ]

    @property
    def super(self) -> CrimeType:
        if self in CrimeCategory.VIOLENT():
            return CrimeType.VIOLENT
        return CrimeType.NON_VIOLENT

    @classmethod
    def parse(cls, raw: str) -> "CrimeCategory":
        """
        Parse a category name, ignoring case, spacing and underscores.

        :raises ValueError: If the name is not one of the ten categories.
        """
        key = " ".join(str(raw).replace("_", " ").split()).casefold()
        for category in cls:
            if category.value.casefold() == key:
                return category
        raise ValueError(f"Unknown crime category: {raw!r}")

    def __str__(self):
        return self.value


class BusinessType(str, Enum):
    """
    The ten business types. A business can belong to several.
    """

    CAFE = "Cafe"
    CONVENIENCE = "Convenience"
    GYM = "Gym"
    INSTITUTION = "Institution"
    LIQUOR = "Liquor"
    LODGING = "Lodging"
    NIGHTLIFE = "Nightlife"
    PHARMACY = "Pharmacy"
    RESTAURANT = "Restaurant"
    RETAIL = "Retail"

    @classmethod
    def ALL(cls) -> List["BusinessType"]:
        return sorted(cls, key=lambda t: t.value)

    @classmethod
    def parse(cls, raw: str) -> "BusinessType":
        key = str(raw).strip().casefold()
        for business_type in cls:
            if business_type.value.casefold() == key:
                return business_type
        raise ValueError(f"Unknown business type: {raw!r}")

    def __str__(self):
        return self.value


class Source(str, Enum):
    """
    The business listing sources.
    """

    A = "A"
    B = "B"
    C = "C"

    def __str__(self):
        return self.value


class ModelSpec(str, Enum):
    """
    Predictor sets for the excess crime regressions.
    """

    POP = "pop"
    POP_INCOME_POVERTY = "pop+income+poverty"

    def predictors(self) -> List[str]:
        if self == ModelSpec.POP:
            return ["population"]
        return ["population", "per_capita_income", "poverty"]

    def __str__(self):
        return self.value


class Study(str, Enum):
    """
    The matched-pairs studies and the tables they emit.
    """

    HIGH_LOW = "high_low"
    HIGH_LOW_LANDUSE = "high_low_landuse"
    HOURS = "hours"

    def __str__(self):
        return self.value
