"""Planar crossing diagrams of embedded closed space curves.

The curve is projected orthogonally along a direction; crossings are found
by segment-pair intersection over a dense polyline (with a spatial hash as
broad phase) and then sharpened by Newton iteration on the exact
trigonometric parameterization.  Genericity of the projection is checked
explicitly — crossing separation, transversality angle, depth gap — and a
failing direction raises NonGenericProjection so that the "auto" mode can
retry with a fresh random direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContinuumCoincidence, NonGenericProjection, NotEmbedded
from ..framed import FramedCurve
from .doublepoints import find_base_double_points

__all__ = ["Crossing", "KnotDiagram", "diagram"]

MIN_SEPARATION = 1e-6  # of curve scale, between distinct crossing points
MIN_ANGLE = 1e-4  # radians, strand transversality at a crossing
MIN_DEPTH = 1e-9  # of curve scale, over/under depth gap
MAX_RETRIES = 50
BASE_SAMPLES = 4096
MAX_SAMPLES = 65536


@dataclass(frozen=True)
class Crossing:
    """One crossing: parameters of the over and under passages, arcs, sign."""

    t_over: float
    t_under: float
    sign: int
    over_arc: int = -1
    in_arc: int = -1
    out_arc: int = -1


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple[Crossing, ...]
    pd_code: tuple[tuple[int, int, int, int], ...]
    projection_direction: tuple[float, float, float]
    n_arcs: int = field(default=0)

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    def pd_text(self) -> str:
        return "\n".join(f"X({a},{b},{c},{d})" for a, b, c, d in self.pd_code)

    def crossing_data(self) -> list[tuple[int, int, int, int]]:
        """(over_arc, in_arc, out_arc, sign) rows for the Alexander matrix."""
        return [(c.over_arc, c.in_arc, c.out_arc, c.sign) for c in self.crossings]

    def to_json(self) -> dict:
        return {
            "projection_direction": list(self.projection_direction),
            "writhe": self.writhe,
            "pd_code": [list(x) for x in self.pd_code],
            "crossings": [
                {
                    "t_over": c.t_over,
                    "t_under": c.t_under,
                    "sign": c.sign,
                    "over_arc": c.over_arc,
                    "in_arc": c.in_arc,
                    "out_arc": c.out_arc,
                }
                for c in self.crossings
            ],
        }


def _orthobasis(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = direction / np.linalg.norm(direction)
    pick = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(d, pick)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    return e1, e2


def _segment_pairs(pts2: np.ndarray) -> list[tuple[int, int]]:
    """Candidate intersecting segment index pairs via a spatial hash."""
    n = len(pts2)
    a, b = pts2, np.roll(pts2, -1, axis=0)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    cell = float(np.max(hi - lo)) + 1e-300
    buckets: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        x0, y0 = int(lo[i, 0] / cell), int(lo[i, 1] / cell)
        x1, y1 = int(hi[i, 0] / cell), int(hi[i, 1] / cell)
        for cx in range(x0, x1 + 1):
            for cy in range(y0, y1 + 1):
                buckets.setdefault((cx, cy), []).append(i)
    pairs = set()
    for members in buckets.values():
        for ii in range(len(members)):
            for jj in range(ii + 1, len(members)):
                i, j = members[ii], members[jj]
                if i > j:
                    i, j = j, i
                gap = min(j - i, n - (j - i))
                if gap > 1:
                    pairs.add((i, j))
    return sorted(pairs)


def _seg_intersect(p1, p2, p3, p4):
    """Parameters (s, r) with p1+s(p2-p1) = p3+r(p4-p3), or None."""
    d1, d2 = p2 - p1, p4 - p3
    det = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(det) < 1e-300:
        return None
    rhs = p3 - p1
    s = (rhs[0] * d2[1] - rhs[1] * d2[0]) / det
    r = (rhs[0] * d1[1] - rhs[1] * d1[0]) / det
    if -1e-12 <= s <= 1 + 1e-12 and -1e-12 <= r <= 1 + 1e-12:
        return s, r
    return None


def _exact_projected(fc: FramedCurve, e1, e2, d):
    anti = fc.gamma_exact
    deriv = [a.derivative() for a in anti]

    def pos3(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.real(a.eval(t)) for a in anti], axis=-1)

    def vel3(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.real(g.eval(t)) for g in deriv], axis=-1)

    def pos2(t):
        p = pos3(t)
        return np.stack([p @ e1, p @ e2], axis=-1)

    def vel2(t):
        v = vel3(t)
        return np.stack([v @ e1, v @ e2], axis=-1)

    def depth(t):
        return pos3(t) @ d

    return pos2, vel2, depth


def _newton_crossing(pos2, vel2, ta, tb, iters=50):
    x = np.array([ta, tb], dtype=float)
    for _ in range(iters):
        f = pos2(x[0]) - pos2(x[1])
        jac = np.stack([vel2(x[0]), -vel2(x[1])], axis=-1)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        if np.linalg.norm(step) > 0.2:
            step *= 0.2 / np.linalg.norm(step)
        x = x + step
        if np.linalg.norm(step) < 1e-14:
            break
    f = pos2(x[0]) - pos2(x[1])
    if np.linalg.norm(f) > 1e-11:
        return None
    return float(x[0] % 2.0), float(x[1] % 2.0)


def _raw_crossings(fc: FramedCurve, e1, e2, d, n_samples: int):
    """Refined crossing parameter pairs (ta, tb) for one projection."""
    pos2, vel2, depth = _exact_projected(fc, e1, e2, d)
    t = np.linspace(0.0, 2.0, n_samples, endpoint=False)
    pts2 = pos2(t)
    scale = float(np.max(np.linalg.norm(pts2 - pts2.mean(axis=0), axis=-1)))
    found: list[tuple[float, float]] = []
    for i, j in _segment_pairs(pts2):
        hit = _seg_intersect(pts2[i], pts2[(i + 1) % n_samples], pts2[j], pts2[(j + 1) % n_samples])
        if hit is None:
            continue
        s, r = hit
        ta = (t[i] + s * (2.0 / n_samples)) % 2.0
        tb = (t[j] + r * (2.0 / n_samples)) % 2.0
        ref = _newton_crossing(pos2, vel2, ta, tb)
        if ref is None:
            raise NonGenericProjection("crossing refinement did not converge")
        ta, tb = ref
        gap = min(abs(ta - tb), 2.0 - abs(ta - tb))
        if gap < 1e-6:
            raise NonGenericProjection("near-cusp crossing (parameters coincide)")
        if any(
            min(abs(ta - fa), 2.0 - abs(ta - fa)) < 1e-9
            and min(abs(tb - fb), 2.0 - abs(tb - fb)) < 1e-9
            for fa, fb in found
        ):
            continue
        found.append((ta, tb))
    return found, pos2, vel2, depth, scale


def _genericity(found, pos2, vel2, depth, scale):
    pts = np.array([pos2(ta) for ta, _ in found]) if found else np.empty((0, 2))
    for i in range(len(found)):
        for j in range(i + 1, len(found)):
            if np.linalg.norm(pts[i] - pts[j]) < MIN_SEPARATION * scale:
                raise NonGenericProjection("crossings too close (near triple point)")
    for ta, tb in found:
        va, vb = vel2(ta), vel2(tb)
        cross = abs(va[0] * vb[1] - va[1] * vb[0])
        angle = math.asin(
            min(1.0, cross / (np.linalg.norm(va) * np.linalg.norm(vb)))
        )
        if angle < MIN_ANGLE:
            raise NonGenericProjection("tangential crossing")
        if abs(depth(ta) - depth(tb)) < MIN_DEPTH * max(scale, 1.0):
            raise NonGenericProjection("depth-degenerate crossing")


def _assemble(found, vel2, depth, direction) -> KnotDiagram:
    # orient each pair as (t_over, t_under) by projection depth
    oriented = []
    for ta, tb in found:
        if depth(ta) > depth(tb):
            oriented.append((ta, tb))
        else:
            oriented.append((tb, ta))
    n = len(oriented)
    if n == 0:
        return KnotDiagram((), (), tuple(direction), n_arcs=1)

    # traversal events: (t, crossing index, is_over)
    events = []
    for idx, (to, tu) in enumerate(oriented):
        events.append((to, idx, True))
        events.append((tu, idx, False))
    events.sort()

    # arcs are delimited by under-passages; arc 0 starts after the last one
    under_order = [e for e in events if not e[2]]
    arc_at = {}
    for pos, (tu, idx, _) in enumerate(under_order):
        arc_at[idx] = pos  # arc entered *after* this underpass
    # arc containing parameter t: count of underpasses at or before t, mod n
    under_ts = [e[0] for e in under_order]

    def arc_of(tq: float) -> int:
        cnt = sum(1 for ut in under_ts if ut <= tq)
        return cnt % n

    crossings = []
    for idx, (to, tu) in enumerate(oriented):
        va, vb = vel2(to), vel2(tu)
        sgn = 1 if va[0] * vb[1] - va[1] * vb[0] > 0 else -1
        in_arc = arc_at[idx]  # arc that runs into this underpass
        out_arc = (arc_at[idx] + 1) % n
        crossings.append(
            Crossing(
                t_over=to,
                t_under=tu,
                sign=sgn,
                over_arc=arc_of(to),
                in_arc=in_arc,
                out_arc=out_arc,
            )
        )

    # PD code: edges numbered 1..2n along the traversal, split at every
    # passage; the 4-tuple lists edge labels counterclockwise from the
    # incoming under edge.
    edge_after = {}
    for pos, (tq, idx, is_over) in enumerate(events):
        edge_after[(idx, is_over)] = pos + 1  # edge leaving this passage
    n_edges = 2 * n

    def edge_into(idx, is_over):
        e = edge_after[(idx, is_over)] - 1
        return n_edges if e == 0 else e

    def edge_outof(idx, is_over):
        e = edge_after[(idx, is_over)]
        return n_edges if e % n_edges == 0 else e % n_edges

    pd = []
    for idx, (to, tu) in enumerate(oriented):
        a = edge_into(idx, False)
        c = edge_outof(idx, False)
        f_in = edge_into(idx, True)
        f_out = edge_outof(idx, True)
        vu, vo = vel2(tu), vel2(to)
        # counterclockwise from the incoming-under end (which points along
        # -vu away from the crossing): the over ends sit at +/-vo
        ang_u = math.atan2(-vu[1], -vu[0])
        ends = [
            (math.atan2(vo[1], vo[0]), f_out),
            (math.atan2(-vo[1], -vo[0]), f_in),
            (math.atan2(vu[1], vu[0]), c),
        ]
        ordered = sorted(ends, key=lambda it: (it[0] - ang_u) % (2 * math.pi))
        pd.append((a, ordered[0][1], ordered[1][1], ordered[2][1]))

    return KnotDiagram(
        crossings=tuple(crossings),
        pd_code=tuple(pd),
        projection_direction=tuple(direction),
        n_arcs=n,
    )


def _try_direction(fc: FramedCurve, direction: np.ndarray) -> KnotDiagram:
    e1, e2 = _orthobasis(direction)
    d = direction / np.linalg.norm(direction)
    n_samples = BASE_SAMPLES
    prev = None
    while n_samples <= MAX_SAMPLES:
        found, pos2, vel2, depth, scale = _raw_crossings(fc, e1, e2, d, n_samples)
        key = tuple(sorted((round(a, 9), round(b, 9)) for a, b in found))
        if prev is not None and key == prev:
            _genericity(found, pos2, vel2, depth, scale)
            return _assemble(found, vel2, depth, d)
        prev = key
        n_samples *= 2
    raise NonGenericProjection("crossing count failed to stabilize under refinement")


def diagram(
    fc: FramedCurve,
    direction="auto",
    seed: int = 0,
    check_embedded: bool = True,
) -> KnotDiagram:
    """Signed crossing diagram of the closed base curve of fc.

    direction is a 3-vector or "auto"; auto draws seeded random directions
    until the genericity checks pass (at most MAX_RETRIES attempts).
    """
    if check_embedded:
        if fc.source is None:
            raise NotEmbedded("embeddedness check requires the exact source path")
        try:
            dps = find_base_double_points(fc.source)
        except ContinuumCoincidence:
            raise NotEmbedded("base curve is multiply covered")
        if dps:
            raise NotEmbedded(f"base curve has {len(dps)} double point(s)")

    if isinstance(direction, str):
        if direction != "auto":
            raise ValueError(f"unknown direction keyword {direction!r}")
        rng = np.random.default_rng(seed)
        last = None
        for _ in range(MAX_RETRIES):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            try:
                return _try_direction(fc, v)
            except NonGenericProjection as exc:
                last = exc
        raise NonGenericProjection(
            f"no generic direction after {MAX_RETRIES} attempts: {last}"
        )
    return _try_direction(fc, np.asarray(direction, dtype=float))
