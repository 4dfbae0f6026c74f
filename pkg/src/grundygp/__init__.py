"""Exact Grundy values for entropy-driven bit-string games, and GP search for formulas."""

from grundygp.games import (
    BitString,
    CMPosition,
    Graph,
    Heaps,
    Ruleset,
    canonical,
    cm_to_arc_kayles,
    entropy,
    heap_options,
    options,
    parse_position,
    to_heaps,
)
from grundygp.solver import (
    GrundyCache,
    PeriodReport,
    detect_period,
    ga2_formula,
    grundy,
    grundy_sequence,
    kayles_reference,
    mex,
    nim_sum,
)

__all__ = [
    "BitString",
    "CMPosition",
    "Graph",
    "GrundyCache",
    "Heaps",
    "PeriodReport",
    "Ruleset",
    "canonical",
    "cm_to_arc_kayles",
    "detect_period",
    "entropy",
    "ga2_formula",
    "grundy",
    "grundy_sequence",
    "heap_options",
    "kayles_reference",
    "mex",
    "nim_sum",
    "options",
    "parse_position",
    "to_heaps",
]
