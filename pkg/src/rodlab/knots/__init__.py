"""Knot analysis: self-intersections, diagrams, Alexander invariants, linking."""

from .alexander import alexander_from_crossings, determinant_value, identify_torus
from .diagram import Crossing, KnotDiagram, diagram
from .doublepoints import DoublePoint, detect_singular_u, find_base_double_points
from .laurent import LaurentPoly, torus_alexander
from .linking import linking
from .report import knot_report
from .tables import TableEntry, identify, knot_table, lookup

__all__ = [
    "Crossing",
    "DoublePoint",
    "KnotDiagram",
    "LaurentPoly",
    "TableEntry",
    "alexander_from_crossings",
    "detect_singular_u",
    "determinant_value",
    "diagram",
    "find_base_double_points",
    "identify",
    "identify_torus",
    "knot_report",
    "knot_table",
    "linking",
    "lookup",
    "torus_alexander",
]
