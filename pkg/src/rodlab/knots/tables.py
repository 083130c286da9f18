"""Reference table of Alexander polynomials for small knots.

The table is small by design: it covers the knot types that actually occur
in this package's outputs (torus knots from the closed-form families plus
the handful of knots realized by the example configurations).  Every entry
was computed in-repo: torus polynomials come from the cyclotomic quotient
formula, composite entries from multiplicativity under connected sum, and
the two non-torus 10-crossing entries from an exhaustive enumeration of
positive 3-braid closures (see the per-entry notes in the data file).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .laurent import LaurentPoly

__all__ = ["TableEntry", "knot_table", "identify", "lookup"]


@dataclass(frozen=True)
class TableEntry:
    name: str
    alexander: LaurentPoly
    determinant: int
    note: str


_cache: list[TableEntry] | None = None


def knot_table() -> list[TableEntry]:
    """Load (and cache) the bundled knot table."""
    global _cache
    if _cache is None:
        raw = resources.files("rodlab.knots.data").joinpath("knot_table.json").read_text()
        entries = []
        for rec in json.loads(raw)["entries"]:
            poly = LaurentPoly.from_pairs(rec["alexander"])
            entries.append(TableEntry(rec["name"], poly, rec["determinant"], rec["note"]))
        _cache = entries
    return _cache


def identify(poly: LaurentPoly) -> list[str]:
    """Names of all table entries whose Alexander polynomial matches.

    Matching is up to units (powers of t and overall sign), which is the
    intrinsic ambiguity of the polynomial.  An empty list means the knot is
    not in the table, not that it is trivial.
    """
    target = poly.normalized()
    return [e.name for e in knot_table() if e.alexander.unit_equal(target)]


def lookup(name: str) -> TableEntry:
    for e in knot_table():
        if e.name == name:
            return e
    raise KeyError(name)
