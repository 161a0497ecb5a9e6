"""Exact engine for (a,b)-town families mod k: checker, constructions, bounds, certificates, search."""

from .setcore import (
    CheckReport,
    Family,
    FamilyFormatError,
    SetWord,
    TownSpec,
    cardinality,
    check_town,
    intersect_size,
    parse_family,
    render_family,
    substitute,
)

__all__ = [
    "CheckReport",
    "Family",
    "FamilyFormatError",
    "SetWord",
    "TownSpec",
    "cardinality",
    "check_town",
    "intersect_size",
    "parse_family",
    "render_family",
    "substitute",
]
