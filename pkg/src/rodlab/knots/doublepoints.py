"""Self-intersection detection for closed base curves.

A base double point is a parameter pair (t0, t1) with gamma(t0) = gamma(t1);
it is "framed" when the adapted frame also matches there, which is
equivalent to the vanishing of two exact integrals of the quaternionic
coefficients (checked via coincidence_residual).  Detection is a coarse
grid scan of |gamma(t1) - gamma(t0)| followed by Gauss-Newton refinement on
the exact three-component difference; the curve itself is a trigonometric
polynomial, so both the residual and its Jacobian are evaluated exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import fsolve

from ..errors import ContinuumCoincidence, DegenerateFamily
from ..families import gamma_closed_form, singular_u
from ..framed import QuatPath, coincidence_residual

__all__ = ["DoublePoint", "find_base_double_points", "detect_singular_u"]

CLOSURE_TOL = 1e-9
RESIDUAL_TOL = 1e-9
FRAMED_TOL = 1e-9
SEPARATION = 1e-4  # minimum circular parameter distance between t0 and t1


@dataclass(frozen=True)
class DoublePoint:
    t0: float
    t1: float
    kind: str  # "base_only" | "framed"
    residual: float


def _exact_gamma(q: QuatPath):
    """(gamma, gamma') as vectorized callables built from the exact series."""
    gp = q.gamma_prime_series()
    anti = [g.antiderivative(0.0) for g in gp]

    def gamma(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.real(a.eval(t)) for a in anti], axis=-1)

    def gamma_prime(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.real(g.eval(t)) for g in gp], axis=-1)

    return gamma, gamma_prime, anti


def _circular_gap(t0: float, t1: float) -> float:
    d = abs(t1 - t0) % 2.0
    return min(d, 2.0 - d)


def _refine(gamma, gamma_prime, t0: float, t1: float, iters: int = 60):
    """Gauss-Newton on F(t0,t1) = gamma(t1) - gamma(t0) (3 eqs, 2 unknowns).

    Returns (t0, t1, residual, smallest/largest Jacobian singular value).
    """
    x = np.array([t0, t1], dtype=float)
    for _ in range(iters):
        f = gamma(x[1]) - gamma(x[0])
        jac = np.stack([-gamma_prime(x[0]), gamma_prime(x[1])], axis=-1)
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        if np.linalg.norm(step) > 0.25:
            step *= 0.25 / np.linalg.norm(step)
        x = x + step
        if np.linalg.norm(step) < 1e-15:
            break
    f = gamma(x[1]) - gamma(x[0])
    jac = np.stack([-gamma_prime(x[0]), gamma_prime(x[1])], axis=-1)
    sing = np.linalg.svd(jac, compute_uv=False)
    cond = sing[-1] / sing[0] if sing[0] > 0 else 0.0
    return float(x[0] % 2.0), float(x[1] % 2.0), float(np.linalg.norm(f)), float(cond)


def find_base_double_points(
    q: QuatPath, grid: int = 512, tol: float = RESIDUAL_TOL
) -> list[DoublePoint]:
    """All parameter pairs where the closed base curve meets itself.

    Raises ContinuumCoincidence when the coincidence set is a curve in
    (t0, t1)-space rather than isolated points (multiply covered circles):
    there the Jacobian of gamma(t1) - gamma(t0) is rank deficient along the
    whole set, so any refined zero with a degenerate Jacobian is conclusive.
    """
    gamma, gamma_prime, anti = _exact_gamma(q)
    for a in anti:
        if abs(a.linear) > CLOSURE_TOL:
            raise DegenerateFamily(
                f"base curve is not closed (linear drift {abs(a.linear):.3g})"
            )

    t = np.linspace(0.0, 2.0, grid, endpoint=False)
    pts = gamma(t)
    scale = float(np.max(np.linalg.norm(pts - pts.mean(axis=0), axis=-1)))
    diff = np.linalg.norm(pts[None, :, :] - pts[:, None, :], axis=-1)

    # mask the near-diagonal band (including the periodic wrap corners)
    i_idx, j_idx = np.meshgrid(np.arange(grid), np.arange(grid), indexing="ij")
    gap = np.abs(j_idx - i_idx)
    gap = np.minimum(gap, grid - gap)
    band = max(3, grid // 64)
    masked = np.where((j_idx > i_idx) & (gap > band), diff, np.inf)

    # local minima of the masked distance surface
    shifted = [np.roll(masked, s, axis=ax) for ax in (0, 1) for s in (1, -1)]
    is_min = np.all([masked <= s for s in shifted], axis=0) & np.isfinite(masked)
    cutoff = 8.0 * (2.0 * math.pi * scale / grid)  # a few grid cells of arc
    cand = np.argwhere(is_min & (masked < cutoff))

    found: list[tuple[float, float, float]] = []
    continuum = False
    for i, j in cand:
        t0, t1, res, cond = _refine(gamma, gamma_prime, t[i], t[j])
        if res > tol * max(scale, 1.0):
            continue
        t0 = 0.0 if min(t0 % 2.0, 2.0 - t0 % 2.0) < 1e-9 else t0 % 2.0
        t1 = 0.0 if min(t1 % 2.0, 2.0 - t1 % 2.0) < 1e-9 else t1 % 2.0
        if t1 < t0:
            t0, t1 = t1, t0
        if _circular_gap(t0, t1) < SEPARATION:
            continue
        if cond < 1e-6:
            continuum = True
            continue
        if any(
            (_circular_gap(t0, f0) < 1e-6 and _circular_gap(t1, f1) < 1e-6)
            or (_circular_gap(t0, f1) < 1e-6 and _circular_gap(t1, f0) < 1e-6)
            for f0, f1, _ in found
        ):
            continue
        found.append((t0, t1, res))

    if continuum:
        raise ContinuumCoincidence(
            "coincidences form a curve in (t0, t1)-space; the base curve is "
            "multiply covered"
        )

    out = []
    for t0, t1, res in sorted(found):
        lin, cross = coincidence_residual(q, t0, t1)
        framed = abs(lin) < FRAMED_TOL and abs(cross) < FRAMED_TOL
        out.append(
            DoublePoint(t0=t0, t1=t1, kind="framed" if framed else "base_only", residual=res)
        )
    return out


def detect_singular_u(h: int, k: int, scan: int = 400) -> tuple[float, float, float]:
    """Locate the family parameter u where the base curve self-intersects.

    Scans u in (0, 1) for the closest approach of the closed-form centerline
    to itself, then solves gamma_u(t1) - gamma_u(t0) = 0 as three equations
    in the three unknowns (u, t0, t1).  Returns (u, t0, t1).
    """
    tgrid = np.linspace(0.0, 2.0, 256, endpoint=False)

    def min_gap(u: float) -> tuple[float, float, float]:
        pts = gamma_closed_form(h, k, u, tgrid)
        diff = np.linalg.norm(pts[None, :, :] - pts[:, None, :], axis=-1)
        n = len(tgrid)
        i_idx, j_idx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        gap = np.abs(j_idx - i_idx)
        gap = np.minimum(gap, n - gap)
        masked = np.where((j_idx > i_idx) & (gap > 8), diff, np.inf)
        i, j = np.unravel_index(np.argmin(masked), masked.shape)
        return float(masked[i, j]), float(tgrid[i]), float(tgrid[j])

    us = np.linspace(0.02, 0.98, scan)
    gaps = [min_gap(u) for u in us]
    best = int(np.argmin([g[0] for g in gaps]))
    u0, (_, t0, t1) = float(us[best]), gaps[best]

    def residual(x):
        u, a, b = x
        pa = gamma_closed_form(h, k, u, np.array([a, b]))
        return pa[1] - pa[0]

    sol, info, ok, _ = fsolve(
        residual, np.array([u0, t0, t1]), full_output=True, xtol=1e-14
    )
    if ok != 1 or np.linalg.norm(info["fvec"]) > 1e-9:
        raise DegenerateFamily(
            f"singular-u refinement failed for (h, k) = ({h}, {k})"
        )
    u, a, b = float(sol[0] % 1.0 if sol[0] < 1.0 else sol[0]), float(sol[1] % 2.0), float(sol[2] % 2.0)
    if b < a:
        a, b = b, a
    return u, a, b
