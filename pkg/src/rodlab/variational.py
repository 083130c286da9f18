"""Generalized rod energy and constrained gradient flow on the Stiefel manifold.

Conventions (the normalization ledger):
  * L2 products use the raw measure on [0, 2], so ||e(k)||^2 = 2.
  * Stiefel membership means ||z||^2 = ||w||^2 = 1 and <z, w> = 0 in that
    raw measure.
  * The energy is E(q) = 4 * int |q'|^2 dt, giving critical levels
    pi^2 (c^2 + d^2) under this scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import MixedParity, NotInStiefel, RankDeficient
from .fourier import FourierSeries, HALF_PI_FREQ
from .framed import QuatPath

__all__ = [
    "StiefelPoint",
    "HermitianPair",
    "FlowResult",
    "energy",
    "gradient",
    "re_inner",
    "u2_apply",
    "normal_frame",
    "project_tangent",
    "retract",
    "fit_lambda",
    "flow",
]

STIEFEL_TOL = 1e-10
DEFAULT_STEP = 1e-3
DEFAULT_GRAD_TOL = 1e-8
DEFAULT_MAX_ITER = 200_000


def energy(q: QuatPath) -> float:
    """E(q) = 4 int_0^2 |q'|^2 dt, evaluated exactly from the coefficients."""
    acc = 0.0
    for s in (q.z, q.w):
        for k, c in s.coeffs.items():
            acc += (HALF_PI_FREQ * k) ** 2 * abs(c) ** 2
    return 8.0 * acc  # 4 * (sum) * ||e(k)||^2


def gradient(q: QuatPath) -> QuatPath:
    """L2 gradient of the energy on the closed/anticlosed sector: -8 q''."""
    if q.parity == "mixed":
        raise MixedParity("gradient requires a closed or anticlosed path")
    d2 = q.derivative().derivative()
    return QuatPath(d2.z.scale(-8.0), d2.w.scale(-8.0))


def re_inner(a: QuatPath, b: QuatPath) -> float:
    """Real L2 product Re(<a_z, b_z> + <a_w, b_w>) with raw measure."""
    return float(np.real(a.z.inner(b.z) + a.w.inner(b.w)))


def u2_apply(q: QuatPath, a: np.ndarray) -> QuatPath:
    """Pointwise right action of a 2x2 matrix: (z, w) -> (z, w) . a."""
    a = np.asarray(a, dtype=complex)
    return QuatPath(
        q.z.scale(a[0, 0]) + q.w.scale(a[1, 0]),
        q.z.scale(a[0, 1]) + q.w.scale(a[1, 1]),
    )


@dataclass(frozen=True)
class StiefelPoint:
    """A quaternionic path satisfying the orthonormality constraints.

    Validates raw-measure norms, Hermitian orthogonality, pure parity, and
    nonvanishing at construction.
    """

    q: QuatPath

    def __post_init__(self):
        rep = {
            "nz": self.q.z.norm_sq(),
            "nw": self.q.w.norm_sq(),
            "zw": self.q.z.inner(self.q.w),
        }
        if abs(rep["nz"] - 1.0) > STIEFEL_TOL or abs(rep["nw"] - 1.0) > STIEFEL_TOL:
            raise NotInStiefel(
                f"norms (||z||^2, ||w||^2) = ({rep['nz']:.12g}, {rep['nw']:.12g})"
            )
        if abs(rep["zw"]) > STIEFEL_TOL:
            raise NotInStiefel(f"<z, w> = {rep['zw']:.3e}")
        if self.q.parity == "mixed":
            raise NotInStiefel("mixed parity: path is neither closed nor anticlosed")
        self.q.check_nonvanishing()

    @property
    def parity(self) -> str:
        return self.q.parity


@dataclass(frozen=True)
class HermitianPair:
    """2x2 Hermitian matrix [[lam1, lam3 - i lam4], [lam3 + i lam4, lam2]]."""

    lam1: float
    lam2: float
    lam3: float
    lam4: float

    @property
    def matrix(self) -> np.ndarray:
        off = self.lam3 + 1j * self.lam4
        return np.array([[self.lam1, np.conj(off)], [off, self.lam2]], dtype=complex)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass
class FlowResult:
    trajectory: np.ndarray  # (n, 4): iteration, energy, gradient norm, step
    limit: StiefelPoint
    residual: float
    fitted: HermitianPair
    fit_residual: float
    converged: bool
    iterations: int
    left_open_stratum: bool = False
    classified: Optional[object] = field(default=None)  # CriticalParams when it fits


def _normal_basis(q: QuatPath) -> list[QuatPath]:
    z, w = q.z, q.w
    zero = FourierSeries.zero()
    return [
        QuatPath(z, zero),
        QuatPath(zero, w),
        QuatPath(w, z),
        QuatPath(w.scale(-1j), z.scale(1j)),
    ]


def normal_frame(point: StiefelPoint) -> list[QuatPath]:
    """Orthonormal basis (w.r.t. Re<.,.>) of the normal space to the Stiefel
    manifold at the given point, each vector normalized by its raw-measure norm."""
    out = []
    for v in _normal_basis(point.q):
        n = np.sqrt(re_inner(v, v))
        out.append(QuatPath(v.z.scale(1.0 / n), v.w.scale(1.0 / n)))
    return out


def project_tangent(point: StiefelPoint, x: QuatPath) -> QuatPath:
    """Remove the components of x along the normal frame at the point."""
    out = x
    for n in normal_frame(point):
        coef = re_inner(out, n)
        out = out - QuatPath(n.z.scale(coef), n.w.scale(coef))
    return out


def gram(q: QuatPath) -> np.ndarray:
    zw = q.z.inner(q.w)
    return np.array(
        [[q.z.norm_sq(), zw], [np.conj(zw), q.w.norm_sq()]], dtype=complex
    )


def _inv_sqrt(g: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    vals, vecs = np.linalg.eigh(g)
    if vals.min() < tol:
        raise RankDeficient(f"Gram matrix nearly singular: min eigenvalue {vals.min():.3e}")
    return vecs @ np.diag(1.0 / np.sqrt(vals)) @ vecs.conj().T


def retract(q: QuatPath) -> StiefelPoint:
    """Return to the constraint set: q -> q . conj(G^{-1/2}).

    Under the right action the Gram matrix transforms as A^T G conj(A), so the
    conjugate of the inverse square root restores exact orthonormality.
    """
    return StiefelPoint(u2_apply(q, np.conj(_inv_sqrt(gram(q)))).chop(0.0))


def fit_lambda(q: QuatPath) -> tuple[HermitianPair, float]:
    """Least-squares Hermitian matrix minimizing ||q'' - Lambda . q||_{L2}.

    The four real parameters multiply the basis (z,0), (0,w), (w,z), (-iw,iz),
    matching q'' = Lambda q componentwise.
    """
    target = q.derivative().derivative()
    basis = _normal_basis(q)
    m = np.array([[re_inner(a, b) for b in basis] for a in basis])
    rhs = np.array([re_inner(target, b) for b in basis])
    lam, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    fit = HermitianPair(*lam)
    approx = u2_apply(q, fit.matrix.T)  # row action with A = Lambda^T gives Lambda q
    resid = target - approx
    return fit, float(np.sqrt(max(re_inner(resid, resid), 0.0)))


# ---------------------------------------------------------------------------
# Gradient flow (dense coefficient arrays over a fixed frequency support)
# ---------------------------------------------------------------------------


class _DenseState:
    """Coefficient vectors of (z, w) on a fixed integer frequency list."""

    def __init__(self, q: QuatPath):
        ks = sorted(set(q.z.coeffs) | set(q.w.coeffs))
        if not ks:
            ks = [0]
        self.ks = np.array(ks, dtype=int)
        self.mu = (HALF_PI_FREQ * self.ks.astype(float)) ** 2
        self.zv = np.array([q.z[k] for k in ks], dtype=complex)
        self.wv = np.array([q.w[k] for k in ks], dtype=complex)

    def to_quatpath(self, zv=None, wv=None) -> QuatPath:
        zv = self.zv if zv is None else zv
        wv = self.wv if wv is None else wv
        z = FourierSeries({int(k): c for k, c in zip(self.ks, zv)})
        w = FourierSeries({int(k): c for k, c in zip(self.ks, wv)})
        return QuatPath(z, w)


def _d_energy(mu, zv, wv) -> float:
    return 8.0 * float(mu @ (np.abs(zv) ** 2 + np.abs(wv) ** 2))


def _d_inner(a, b) -> complex:
    return 2.0 * complex(np.vdot(b, a))  # <a,b> = 2 sum a conj(b)


def _d_project_tangent(zv, wv, xz, xw):
    """Tangent projection at an on-Stiefel dense state (normal frame is
    orthonormal there)."""
    basis = [
        (zv, np.zeros_like(wv)),
        (np.zeros_like(zv), wv),
        (wv / np.sqrt(2), zv / np.sqrt(2)),
        (-1j * wv / np.sqrt(2), 1j * zv / np.sqrt(2)),
    ]
    for bz, bw in basis:
        coef = np.real(_d_inner(xz, bz) + _d_inner(xw, bw))
        xz = xz - coef * bz
        xw = xw - coef * bw
    return xz, xw


def _d_retract(zv, wv):
    g = np.array(
        [
            [np.real(_d_inner(zv, zv)), _d_inner(zv, wv)],
            [_d_inner(wv, zv), np.real(_d_inner(wv, wv))],
        ],
        dtype=complex,
    )
    a = np.conj(_inv_sqrt(g))
    return zv * a[0, 0] + wv * a[1, 0], zv * a[0, 1] + wv * a[1, 1]


def _d_min_mag_sq(ks, zv, wv, n: int = 512) -> float:
    t = np.linspace(0.0, 2.0, n)
    ph = np.exp(1j * HALF_PI_FREQ * np.outer(t, ks))
    return float(np.min(np.abs(ph @ zv) ** 2 + np.abs(ph @ wv) ** 2))


def flow(
    q0: StiefelPoint,
    step: float = DEFAULT_STEP,
    grad_tol: float = DEFAULT_GRAD_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    classify: bool = True,
    record_every: int = 1,
) -> FlowResult:
    """Projected gradient descent on the Stiefel manifold.

    Iterates q <- retract(q - s * P_q(grad E)) with backtracking (halving s
    whenever the energy would increase, recovering by doubling after each
    accepted step up to a curvature-based cap).  The recorded energy sequence
    is nonincreasing.  Terminates when the projected gradient norm drops
    below grad_tol; a capped run returns converged=False.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    state = _DenseState(q0.q)
    ks, mu, zv, wv = state.ks, state.mu, state.zv, state.wv
    step_max = 1.0 / max(8.0 * mu.max(), 1.0)
    s = min(step, step_max)
    traj = []
    e = _d_energy(mu, zv, wv)
    residual = np.inf
    converged = False
    left_open_stratum = False
    it = 0
    for it in range(max_iter + 1):
        gz, gw = 8.0 * mu * zv, 8.0 * mu * wv
        tz, tw = _d_project_tangent(zv, wv, gz, gw)
        residual = float(
            np.sqrt(np.real(_d_inner(tz, tz) + _d_inner(tw, tw)))
        )
        if it % record_every == 0:
            traj.append((it, e, residual, s))
        if residual < grad_tol:
            converged = True
            break
        if it == max_iter:
            break
        accepted = False
        while s > 1e-16:
            try:
                nzv, nwv = _d_retract(zv - s * tz, wv - s * tw)
            except RankDeficient:
                s *= 0.5
                continue
            ne = _d_energy(mu, nzv, nwv)
            # slack of a few ulps: near the limit the true decrement drops
            # below float rounding of the energy itself
            if ne <= e + 1e-13 * max(abs(e), 1.0):
                zv, wv, e = nzv, nwv, min(ne, e)
                accepted = True
                s = min(2.0 * s, step_max)
                break
            s *= 0.5
        if not accepted:
            break  # stalled: step underflow
        if it % 200 == 0 and _d_min_mag_sq(ks, zv, wv) < 1e-8:
            left_open_stratum = True
            break
    if traj and traj[-1][0] != it:
        traj.append((it, e, residual, s))
    if _d_min_mag_sq(ks, zv, wv, 4096) < 1e-8:
        left_open_stratum = True
    limit_q = state.to_quatpath(zv, wv).chop(0.0)
    limit = StiefelPoint(limit_q)
    fitted, fit_res = fit_lambda(limit_q)
    classified = None
    if classify and converged and fit_res < 1e-6:
        from .families import normal_form_or_none

        classified = normal_form_or_none(limit)
    return FlowResult(
        trajectory=np.array(traj, dtype=float),
        limit=limit,
        residual=residual,
        fitted=fitted,
        fit_residual=fit_res,
        converged=converged,
        iterations=it,
        left_open_stratum=left_open_stratum,
        classified=classified,
    )
