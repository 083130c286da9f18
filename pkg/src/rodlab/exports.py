"""File export: curve CSV, flow-trajectory CSV, OBJ tube meshes, JSON.

All floats in JSON summaries are serialized with 17 significant digits so
that runs are reproducible bit-for-bit from their summary files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Union

import numpy as np

from .framed import FramedCurve, InvariantTrace, invariants

__all__ = ["curve_csv", "flow_csv", "tube_obj", "json_dumps"]


def curve_csv(fc: FramedCurve, trace: InvariantTrace | None = None) -> str:
    """CSV of the framed curve: t, centerline, frame, speed, invariants."""
    if trace is None:
        if fc.source is None:
            raise ValueError("invariants require the exact source path")
        trace = invariants(fc.source, grid_size=len(fc.grid))
    if len(trace.grid) != len(fc.grid):
        raise ValueError("trace and curve grids differ")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "gx", "gy", "gz", "vx", "vy", "vz", "speed", "kappa1", "kappa2", "tw", "st"])
    for i, t in enumerate(fc.grid):
        w.writerow(
            [f"{v:.17g}" for v in (
                t, *fc.gamma[i], *fc.frame[i], fc.speed[i],
                trace.kappa1[i], trace.kappa2[i], trace.tw[i], trace.st[i],
            )]
        )
    return buf.getvalue()


def flow_csv(trajectory: np.ndarray) -> str:
    """CSV of a flow trajectory: iteration, energy, residual, step."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration", "energy", "residual", "step"])
    for row in np.atleast_2d(trajectory):
        w.writerow([f"{int(row[0])}", *(f"{v:.17g}" for v in row[1:])])
    return buf.getvalue()


def tube_obj(fc: FramedCurve, tube_scale: float | None = None, n_around: int = 64) -> str:
    """OBJ tube mesh around the centerline, radius proportional to speed.

    The tube cross-section radius at parameter t is tube_scale * speed(t)
    (the inflatable-rod picture: thickness carries the speed data).  The
    default scale is 0.05 * (curve extent) / max(speed).  Output is Y-up:
    world (x, y, z) is written as (x, z, y) with the handedness fixed by
    negating the new z.
    """
    n = len(fc.grid) - 1 if np.isclose(fc.grid[-1], 2.0) else len(fc.grid)
    pts = fc.gamma[:n]
    tans = np.array([fc.tangent_at(t) for t in fc.grid[:n]])
    tans /= np.linalg.norm(tans, axis=-1, keepdims=True)
    nor = fc.frame[:n]
    bin_ = np.cross(tans, nor)
    speed = fc.speed[:n]
    if tube_scale is None:
        extent = float(np.max(np.linalg.norm(pts - pts.mean(axis=0), axis=-1)))
        tube_scale = 0.05 * extent / float(speed.max())
    ang = 2.0 * math.pi * np.arange(n_around) / n_around
    ca, sa = np.cos(ang), np.sin(ang)

    lines = ["# tube mesh around a framed curve (Y-up)"]
    verts = []
    norms = []
    for i in range(n):
        r = tube_scale * speed[i]
        ring_n = ca[:, None] * nor[i] + sa[:, None] * bin_[i]
        ring_v = pts[i] + r * ring_n
        verts.append(ring_v)
        norms.append(ring_n)
    for ring in verts:
        for x, y, z in ring:
            lines.append(f"v {x:.9g} {z:.9g} {-y:.9g}")
    for ring in norms:
        for x, y, z in ring:
            lines.append(f"vn {x:.9g} {z:.9g} {-y:.9g}")
    for i in range(n):
        i2 = (i + 1) % n
        for a in range(n_around):
            a2 = (a + 1) % n_around
            v00 = i * n_around + a + 1
            v01 = i * n_around + a2 + 1
            v10 = i2 * n_around + a + 1
            v11 = i2 * n_around + a2 + 1
            lines.append(f"f {v00}//{v00} {v10}//{v10} {v11}//{v11}")
            lines.append(f"f {v00}//{v00} {v11}//{v11} {v01}//{v01}")
    return "\n".join(lines) + "\n"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.17g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    if isinstance(obj, complex):
        return {"re": _round_floats(obj.real), "im": _round_floats(obj.imag)}
    return obj


def json_dumps(obj: Union[dict, list]) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    return json.dumps(_round_floats(obj), indent=1, sort_keys=True)
