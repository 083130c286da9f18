"""End-to-end knot classification of a framed curve.

The output is deliberately labeled "consistent with ..." — classification is
by Alexander polynomial, determinant, and a crossing-number upper bound,
which separates every knot type this package produces but is not a complete
invariant.  Chirality is never decided (Alexander cannot see it); the writhe
of the computed diagram is reported as a heuristic only.
"""

from __future__ import annotations

from ..errors import ContinuumCoincidence, NonGenericProjection
from ..framed import FramedCurve
from .alexander import alexander_from_crossings, determinant_value, identify_torus
from .diagram import diagram
from .doublepoints import find_base_double_points
from .tables import identify

__all__ = ["knot_report"]


def knot_report(fc: FramedCurve, seed: int = 0) -> dict:
    """Classify the knot type of the base curve; always returns a report dict."""
    if fc.source is None:
        raise ValueError("knot_report requires the exact source path")
    try:
        dps = find_base_double_points(fc.source)
    except ContinuumCoincidence:
        return {
            "embedded": False,
            "reason": "multiply covered circle (coincidence continuum)",
            "knot": None,
        }
    if dps:
        return {
            "embedded": False,
            "reason": f"{len(dps)} base double point(s)",
            "double_points": [
                {"t0": d.t0, "t1": d.t1, "kind": d.kind, "residual": d.residual}
                for d in dps
            ],
            "knot": None,
        }
    try:
        dg = diagram(fc, seed=seed, check_embedded=False)
    except NonGenericProjection as exc:
        return {
            "embedded": True,
            "diagram": None,
            "reason": f"no generic projection found: {exc}",
            "knot": None,
        }
    poly = alexander_from_crossings(dg.crossing_data(), max(dg.n_arcs, 1))
    det = determinant_value(poly)
    torus = identify_torus(poly)
    matches = identify(poly)
    if torus is not None:
        label = f"consistent with torus({torus[0]},{torus[1]}), chirality undetermined"
    elif matches:
        label = "consistent with " + " or ".join(matches) + ", chirality undetermined"
    elif poly.span == 0:
        label = "consistent with unknot"
    else:
        label = "not in table (Alexander polynomial reported)"
    return {
        "embedded": True,
        "crossings": len(dg.crossings),
        "writhe": dg.writhe,
        "projection_direction": list(dg.projection_direction),
        "alexander": [[e, c] for e, c in sorted(poly.normalized().coeffs.items())],
        "determinant": det,
        "torus": list(torus) if torus else None,
        "table_matches": matches,
        "knot": label,
        "pd_code": [list(x) for x in dg.pd_code],
    }
