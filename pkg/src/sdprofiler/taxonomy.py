"""Canonical taxonomy: characteristic kinds, their value sets, and the
fixed indicator-code tables.

Everything here is constant reference data.  The gender table has twelve
indicator codes, the age table six, the sphere-of-activity table eleven;
gender and age are binary-valued, sphere has one value per indicator row.
Education is declarable by a member but never inferred from text, so it
owns no table.
"""

from __future__ import annotations

from enum import Enum


class CharacteristicKind(str, Enum):
    GENDER = "gender"
    AGE = "age"
    SPHERE = "sphere"
    EDUCATION = "education"


GENDER = CharacteristicKind.GENDER
AGE = CharacteristicKind.AGE
SPHERE = CharacteristicKind.SPHERE
EDUCATION = CharacteristicKind.EDUCATION

# Kinds whose values can be inferred from posted content.
SCOREABLE_KINDS = (GENDER, AGE, SPHERE)

# Presentation / profile order. Not alphabetical, so never sort kinds directly.
KIND_ORDER = {GENDER: 0, AGE: 1, SPHERE: 2, EDUCATION: 3}


GENDER_INDICATORS = {
    "Gender-A": "The emotional component",
    "Gender-B": "Cultural aspects",
    "Gender-C": "References",
    "Gender-D": "Guidelines and instructions",
    "Gender-E": "Lexical aspect",
    "Gender-F": "Method of expressing content",
    "Gender-G": "Timeframe",
    "Gender-H": "Insignificance",
    "Gender-I": "Power, influence and authoritativeness",
    "Gender-J": "Beneficiation of language",
    "Gender-K": "Composition",
    "Gender-L": "Concretization",
}

AGE_INDICATORS = {
    "Age-A": "Affiliative and aggressive style",
    "Age-B": "Slang variation",
    "Age-C": "Modulation of voice and sound similarity",
    "Age-D": "Text economy",
    "Age-E": "Non-codified units and non-verbal means",
    "Age-F": "Deformalization",
}

SPHERE_INDICATORS = {
    "Sphere-A": "Physico-Mathematical, Technical and Economic sphere",
    "Sphere-B": "Chemicals sphere",
    "Sphere-C": "Sociological, Historical, Philosophical and Political sphere",
    "Sphere-D": "Natural sphere",
    "Sphere-E": "Medical sphere",
    "Sphere-F": "Philological-Pedagogical sphere",
    "Sphere-G": "Sphere of Architecture and Art",
    "Sphere-H": "Sphere of Physical Training and Sport",
    "Sphere-I": "Agricultural sphere",
    "Sphere-J": "Legal sphere",
    "Sphere-K": "Military sphere",
}

INDICATOR_TABLES = {
    GENDER: GENDER_INDICATORS,
    AGE: AGE_INDICATORS,
    SPHERE: SPHERE_INDICATORS,
}

VALUE_TABLES = {
    GENDER: {"female": "Female", "male": "Male"},
    AGE: {"adolescent": "Adolescent", "adult": "Adult"},
    SPHERE: {
        "sphere-" + code.rsplit("-", 1)[1].lower(): label
        for code, label in SPHERE_INDICATORS.items()
    },
}

# Fallback indicator for learned markers nobody assigned by hand. Sphere has
# no single fallback: each sphere value maps onto its own indicator row.
DEFAULT_TRAINING_INDICATOR = {
    GENDER: "Gender-E",
    AGE: "Age-B",
}


def sphere_indicator_for_value(value_code: str) -> str:
    """Indicator code paired with a sphere value ('sphere-c' -> 'Sphere-C')."""
    return "Sphere-" + value_code.rsplit("-", 1)[1].upper()


def is_known_indicator(kind: CharacteristicKind, code: str) -> bool:
    return code in INDICATOR_TABLES.get(kind, {})


def is_known_value(kind: CharacteristicKind, code: str) -> bool:
    return code in VALUE_TABLES.get(kind, {})
