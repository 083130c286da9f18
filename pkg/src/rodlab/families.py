"""Closed-form critical families of the generalized rod energy.

The critical set consists of paths q = (xi1 e(c) + xi2 e(-c),
zeta1 e(d) + zeta2 e(-d)) with c = d (mod 2), scaled by 1/sqrt(2) so the
raw-measure Stiefel norms hold.  Two sub-families:

  * the isolated branch: c = +/-d, reducible to the pattern
    (e(c), e(-c))/sqrt(2) -- multiply covered untwisted circles;
  * the generic branch c != +/-d, with a unitary cross-section obtained by
    sorting frequencies, swapping coordinates, and fixing phases.

A one-parameter slice q_u = q(c, d, u, sqrt(1-u^2), 1, 0), written in the
variables h = (c+d)/2, k = (c-d)/2, sweeps between multiply covered circles
through exactly two torus knot types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousForm,
    BadParity,
    DegenerateFamily,
    GcdViolation,
    NotCritical,
    NotInStiefel,
)
from .fourier import FourierSeries
from .framed import FramedCurve, QuatPath, hopf
from .variational import StiefelPoint, fit_lambda, u2_apply

__all__ = [
    "CriticalParams",
    "FamilyParams",
    "KnotPrediction",
    "make_critical",
    "q1_pattern",
    "normal_form",
    "normal_form_or_none",
    "energy_level",
    "family",
    "gamma_closed_form",
    "singular_u",
    "predicted_knot",
    "similarity_align",
]

FIT_TOL = 1e-8
PHASE_TOL = 1e-9


def _c(x: complex) -> complex:
    return complex(x)


@dataclass(frozen=True)
class CriticalParams:
    """Parameters (c, d, xi1, xi2, zeta1, zeta2) of a closed-form critical path."""

    c: int
    d: int
    xi1: complex
    xi2: complex
    zeta1: complex
    zeta2: complex
    normal: bool = field(default=False, compare=False)

    def validate(self) -> None:
        if (self.c - self.d) % 2 != 0:
            raise BadParity(f"c = {self.c}, d = {self.d} must agree mod 2")
        if self.c == 0 and self.d == 0:
            raise NotInStiefel("(c, d) = (0, 0) cannot satisfy the constraints")
        for name, a, b in (("xi", self.xi1, self.xi2), ("zeta", self.zeta1, self.zeta2)):
            n = abs(_c(a)) ** 2 + abs(_c(b)) ** 2
            if abs(n - 1.0) > 1e-9:
                raise NotInStiefel(f"|{name}1|^2 + |{name}2|^2 = {n:.12g}, expected 1")

    def to_json(self) -> dict:
        def cx(v):
            v = _c(v)
            return {"re": v.real, "im": v.imag}

        return {
            "c": self.c,
            "d": self.d,
            "xi1": cx(self.xi1),
            "xi2": cx(self.xi2),
            "zeta1": cx(self.zeta1),
            "zeta2": cx(self.zeta2),
        }

    @staticmethod
    def from_json(data: dict) -> "CriticalParams":
        def cx(v):
            return v["re"] + 1j * v["im"]

        return CriticalParams(
            c=int(data["c"]),
            d=int(data["d"]),
            xi1=cx(data["xi1"]),
            xi2=cx(data["xi2"]),
            zeta1=cx(data["zeta1"]),
            zeta2=cx(data["zeta2"]),
        )


@dataclass(frozen=True)
class FamilyParams:
    """One-parameter slice parameters: integers (h, k) and u in [0, 1]."""

    h: int
    k: int
    u: float

    def validate(self) -> None:
        if self.h == 0 and self.k == 0:
            raise DegenerateFamily("(h, k) = (0, 0)")
        if not (0.0 <= self.u <= 1.0):
            raise DegenerateFamily(f"u = {self.u} outside [0, 1]")

    def to_json(self) -> dict:
        return {"h": self.h, "k": self.k, "u": self.u}

    @staticmethod
    def from_json(data: dict) -> "FamilyParams":
        return FamilyParams(h=int(data["h"]), k=int(data["k"]), u=float(data["u"]))


def _two_mode(freq: int, a1: complex, a2: complex) -> FourierSeries:
    s = FourierSeries.basis(freq, a1 / np.sqrt(2.0))
    return s + FourierSeries.basis(-freq, a2 / np.sqrt(2.0))


def make_critical(p: CriticalParams) -> StiefelPoint:
    """Build the critical path for the given parameters, Stiefel-scaled.

    Raises NotInStiefel when the coefficient conditions fail (e.g. the
    orthonormality required when c = +/-d, or colliding modes at c or d = 0).
    """
    p.validate()
    q = QuatPath(_two_mode(p.c, p.xi1, p.xi2), _two_mode(p.d, p.zeta1, p.zeta2))
    return StiefelPoint(q)  # exact constraint check happens here


def q1_pattern(c: int, stiefel_scaled: bool = True) -> QuatPath:
    """The isolated-branch pattern (e(c), e(-c)), optionally Stiefel-scaled."""
    if c == 0:
        raise NotInStiefel("c = 0 is excluded from the isolated branch")
    a = 1.0 / np.sqrt(2.0) if stiefel_scaled else 1.0
    return QuatPath(FourierSeries.basis(c, a), FourierSeries.basis(-c, a))


def energy_level(c: int, d: int) -> float:
    """Critical energy level pi^2 (c^2 + d^2) under the raw-measure scaling."""
    if (c - d) % 2 != 0:
        raise BadParity(f"c = {c}, d = {d} must agree mod 2")
    if c == 0 and d == 0:
        raise BadParity("(c, d) = (0, 0) is not a critical level")
    return np.pi**2 * (c**2 + d**2)


# ---------------------------------------------------------------------------
# Normal form (unitary cross-section)
# ---------------------------------------------------------------------------


def _freq_from_eig(lam: float) -> int:
    f = 2.0 * np.sqrt(max(-lam, 0.0)) / np.pi
    k = int(round(f))
    if abs(f - k) > 1e-6:
        raise NotCritical(f"eigenvalue {lam:.6g} is not of the form -(pi*k/2)^2")
    return k


def _phase_fix(a1: complex, a2: complex) -> tuple[complex, bool]:
    """Unit phase making a1 real >= 0 (a2 when a1 vanishes).  Returns the
    phase factor to multiply by and whether the tie-break fired."""
    if abs(a1) > PHASE_TOL:
        return np.conj(a1) / abs(a1), False
    if abs(a2) > PHASE_TOL:
        return np.conj(a2) / abs(a2), True
    return 1.0 + 0.0j, False


def _clean(v: complex, tol: float = 1e-12) -> complex:
    re = 0.0 if abs(v.real) < tol else v.real
    im = 0.0 if abs(v.imag) < tol else v.imag
    return complex(re, im)


def normal_form(
    point: StiefelPoint, fit_tol: float = FIT_TOL, strict: bool = True
) -> CriticalParams:
    """Unique cross-section representative of the unitary orbit of a critical path.

    Diagonalizes the fitted Hermitian coefficient matrix, reads the integer
    frequencies off the eigenvalues, sorts/swaps so c > d >= 0 (or collapses
    to the isolated pattern when the eigenvalues coincide), and fixes the
    residual phases so that xi1 and zeta1 are real and nonnegative.  The zeta
    phase fix goes beyond the published cross-section conditions but is needed
    for a deterministic representative.

    With strict=True the tie-break case (xi1 = 0 within tolerance) raises
    AmbiguousForm; the result is still deterministic either way.
    """
    q = point.q
    fitted, resid = fit_lambda(q)
    if resid > fit_tol:
        raise NotCritical(f"fit residual {resid:.3e} exceeds {fit_tol:.1e}")
    vals, vecs = np.linalg.eigh(fitted.matrix)
    # z gets the most negative eigenvalue so that c >= d
    c = _freq_from_eig(vals[0])
    d = _freq_from_eig(vals[1])
    if c == d:
        # isolated branch: any member of this orbit reduces to (e(c), e(-c))
        return CriticalParams(c, c, 1.0, 0.0, 0.0, 1.0, normal=True)
    qd = u2_apply(q, vecs.conj()).chop(1e-10)
    xi1 = np.sqrt(2.0) * _c(qd.z[c])
    xi2 = np.sqrt(2.0) * _c(qd.z[-c]) if c != 0 else 0.0
    zeta1 = np.sqrt(2.0) * _c(qd.w[d])
    zeta2 = np.sqrt(2.0) * _c(qd.w[-d]) if d != 0 else 0.0
    ph_xi, tie_xi = _phase_fix(xi1, xi2)
    ph_zeta, tie_zeta = _phase_fix(zeta1, zeta2)
    if strict and tie_xi:
        raise AmbiguousForm(
            "xi1 vanishes; used the documented tie-break (xi2 real >= 0)"
        )
    xi1, xi2 = _clean(xi1 * ph_xi), _clean(xi2 * ph_xi)
    zeta1, zeta2 = _clean(zeta1 * ph_zeta), _clean(zeta2 * ph_zeta)
    p = CriticalParams(c, d, xi1, xi2, zeta1, zeta2, normal=True)
    p.validate()
    return p


def normal_form_or_none(point: StiefelPoint):
    try:
        return normal_form(point, strict=False)
    except NotCritical:
        return None


# ---------------------------------------------------------------------------
# One-parameter families
# ---------------------------------------------------------------------------


def family_params_to_critical(fp: FamilyParams) -> CriticalParams:
    fp.validate()
    u = float(fp.u)
    return CriticalParams(
        c=fp.h + fp.k,
        d=fp.h - fp.k,
        xi1=u,
        xi2=math.sqrt(max(1.0 - u * u, 0.0)),
        zeta1=1.0,
        zeta2=0.0,
    )


def gamma_closed_form(h: int, k: int, u: float, t: np.ndarray) -> np.ndarray:
    """Closed-form centerline of the one-parameter family (h, k, u != edge
    cases), valid for h, k, h+k all nonzero.  Matches the frame-Hopf output
    up to translation, rotation, and overall scale."""
    if h == 0 or k == 0 or h + k == 0:
        raise DegenerateFamily(f"(h, k) = ({h}, {k}) has h, k, or h+k zero")
    t = np.asarray(t, dtype=float)
    v = math.sqrt(max(1.0 - u * u, 0.0))
    s = lambda lam: np.sin(lam * np.pi * t)  # noqa: E731
    c = lambda lam: np.cos(lam * np.pi * t)  # noqa: E731
    return (2.0 / np.pi) * np.stack(
        [
            (u * v / (h + k)) * s(h + k),
            -(u / k) * c(k) + (v / h) * c(h),
            (u / k) * s(k) + (v / h) * s(h),
        ],
        axis=-1,
    )


def similarity_align(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Best-fit similarity (rotation + scale + translation) mapping point set a
    onto b.  Returns the aligned copy of a and the RMS misfit."""
    ca, cb = a - a.mean(axis=0), b - b.mean(axis=0)
    h = ca.T @ cb
    u_svd, sing, vt = np.linalg.svd(h)
    sign = np.sign(np.linalg.det(u_svd @ vt))
    dmat = np.diag([1.0, 1.0, sign])
    r = u_svd @ dmat @ vt
    scale = (sing[0] + sing[1] + sign * sing[2]) / np.sum(ca**2)
    aligned = scale * (ca @ r) + b.mean(axis=0)
    rms = float(np.sqrt(np.mean(np.sum((aligned - b) ** 2, axis=-1))))
    return aligned, rms


def family(
    fp: FamilyParams, grid_size: int = 1024, cross_check: bool = True
) -> tuple[StiefelPoint, FramedCurve]:
    """Construct the family member q_u and its framed curve.

    When possible (h, k, h+k nonzero and u away from the endpoints) the
    frame-Hopf centerline is cross-checked against the closed-form
    parameterization up to a best-fit similarity.
    """
    fp.validate()
    point = make_critical(family_params_to_critical(fp))
    fc = hopf(point.q, grid_size)
    if cross_check and fp.h != 0 and fp.k != 0 and fp.h + fp.k != 0:
        ref = gamma_closed_form(fp.h, fp.k, fp.u, fc.grid)
        _, rms = similarity_align(fc.gamma, ref)
        scale = max(float(np.max(np.linalg.norm(ref - ref.mean(axis=0), axis=-1))), 1e-30)
        if rms / scale > 1e-8:
            raise DegenerateFamily(
                f"frame-Hopf centerline disagrees with the closed form (rms {rms:.3e})"
            )
    return point, fc


def singular_u(h: int, k: int) -> float:
    """The unique u in (0, 1) at which the family base curve self-intersects."""
    if h == 0 or k == 0:
        raise DegenerateFamily("h and k must be nonzero")
    return math.sqrt(k * k / (h * h + k * k))


@dataclass(frozen=True)
class KnotPrediction:
    """Predicted topology of a family member's base curve."""

    kind: str  # "circle" | "torus" | "nonembedded"
    cover: int | None = None
    link: int | None = None
    p: int | None = None
    q: int | None = None

    @property
    def canonical(self) -> tuple[int, int] | None:
        """Positive canonical torus parameters (p, q) with 2 <= p < q, or None
        (unknot or not a torus-knot case)."""
        if self.kind != "torus":
            return None
        a, b = abs(self.p), abs(self.q)
        a, b = min(a, b), max(a, b)
        if a < 2:
            return None  # unknot
        return (a, b)

    @property
    def is_unknot(self) -> bool:
        return self.kind == "torus" and self.canonical is None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "circle":
            out.update(cover=self.cover, link=self.link)
        elif self.kind == "torus":
            out.update(p=self.p, q=self.q)
            out["canonical"] = list(self.canonical) if self.canonical else None
            out["unknot"] = self.is_unknot
        return out


def predicted_knot(fp: FamilyParams) -> KnotPrediction:
    """Topology of the family base curve as a function of u."""
    fp.validate()
    h, k = fp.h, fp.k
    if h == 0 or k == 0:
        raise DegenerateFamily("h and k must be nonzero for knot predictions")
    if math.gcd(h, h + k) != 1 or math.gcd(k, h + k) != 1:
        raise GcdViolation(f"gcd conditions fail for (h, k) = ({h}, {k})")
    ustar = singular_u(h, k)
    if fp.u == 0.0:
        return KnotPrediction(kind="circle", cover=abs(h), link=k)
    if fp.u == 1.0:
        return KnotPrediction(kind="circle", cover=abs(k), link=-h)
    if abs(fp.u - ustar) < 1e-12:
        return KnotPrediction(kind="nonembedded")
    if fp.u < ustar:
        return KnotPrediction(kind="torus", p=h, q=h + k)
    return KnotPrediction(kind="torus", p=-k, q=h + k)
