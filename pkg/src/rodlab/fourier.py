"""Exact arithmetic on finite Fourier series in the basis e(k): t -> exp(i*pi*k*t/2).

The domain is fixed to I = [0, 2].  A series with only even frequencies is a
smoothly closed function on I; a series with only odd frequencies is anticlosed
(all derivatives negate between the endpoints).  The Hermitian L2 product uses
the raw measure on [0, 2], so ||e(k)||^2 = 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = ["FourierSeries", "AffineFourier", "HALF_PI_FREQ"]

# e(k)' = (i * pi * k / 2) e(k)
HALF_PI_FREQ = np.pi / 2.0


def _pruned(items: Iterable[tuple[int, complex]]) -> dict[int, complex]:
    out: dict[int, complex] = {}
    for k, c in items:
        c = complex(c)
        if c != 0:
            out[int(k)] = out.get(int(k), 0.0) + c
    return {k: c for k, c in out.items() if c != 0}


@dataclass(frozen=True)
class FourierSeries:
    """Sparse map from integer frequency k to a complex coefficient.

    Immutable; all arithmetic returns new instances.  Zero coefficients are
    pruned on construction, so the stored support is exact.
    """

    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _pruned(dict(self.coeffs).items()))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def basis(k: int, coeff: complex = 1.0) -> "FourierSeries":
        """The single mode coeff * e(k)."""
        return FourierSeries({int(k): coeff})

    @staticmethod
    def zero() -> "FourierSeries":
        return FourierSeries({})

    # -- structure ---------------------------------------------------------

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    @property
    def degree(self) -> int:
        """Largest |k| in the support (0 for the zero series)."""
        return max((abs(k) for k in self.coeffs), default=0)

    @property
    def parity(self) -> str:
        """'even' | 'odd' | 'mixed'.  The zero series counts as even (closed)."""
        if not self.coeffs:
            return "even"
        par = {k % 2 for k in self.coeffs}
        if par == {0}:
            return "even"
        if par == {1}:
            return "odd"
        return "mixed"

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> complex:
        return self.coeffs.get(int(k), 0.0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        merged = dict(self.coeffs)
        for k, c in other.coeffs.items():
            merged[k] = merged.get(k, 0.0) + c
        return FourierSeries(merged)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + (-other)

    def __neg__(self) -> "FourierSeries":
        return FourierSeries({k: -c for k, c in self.coeffs.items()})

    def scale(self, a: complex) -> "FourierSeries":
        return FourierSeries({k: a * c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            prod: dict[int, complex] = {}
            for j, cj in self.coeffs.items():
                for k, ck in other.coeffs.items():
                    prod[j + k] = prod.get(j + k, 0.0) + cj * ck
            return FourierSeries(prod)
        return self.scale(other)

    __rmul__ = __mul__

    def conjugate(self) -> "FourierSeries":
        """Complex conjugate: conj(sum c_k e(k)) = sum conj(c_k) e(-k)."""
        return FourierSeries({-k: np.conj(c) for k, c in self.coeffs.items()})

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "FourierSeries":
        return FourierSeries(
            {k: 1j * HALF_PI_FREQ * k * c for k, c in self.coeffs.items()}
        )

    def antiderivative(self, value_at_0: complex = 0.0) -> "AffineFourier":
        """Exact antiderivative.

        Every k != 0 mode integrates to c_k / (i*pi*k/2) e(k); the DC mode
        becomes the linear term.  The constant is fixed by the value at t=0.
        """
        series = FourierSeries(
            {k: c / (1j * HALF_PI_FREQ * k) for k, c in self.coeffs.items() if k != 0}
        )
        linear = self.coeffs.get(0, 0.0)
        constant = complex(value_at_0) - series.eval(0.0)
        return AffineFourier(series=series, linear=linear, constant=constant)

    # -- evaluation and inner products --------------------------------------

    def eval(self, t):
        """Evaluate at a scalar or array of parameter values."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for k, c in self.coeffs.items():
            out += c * np.exp(1j * HALF_PI_FREQ * k * t)
        if out.ndim == 0:
            return complex(out)
        return out

    def inner(self, other: "FourierSeries") -> complex:
        """Hermitian L2 product <a,b> = int_0^2 a conj(b) dt = 2 sum a_k conj(b_k)."""
        acc = 0.0 + 0.0j
        a, b = self.coeffs, other.coeffs
        keys = a.keys() if len(a) <= len(b) else b.keys()
        for k in keys:
            if k in a and k in b:
                acc += a[k] * np.conj(b[k])
        return complex(2.0 * acc)

    def norm_sq(self) -> float:
        return 2.0 * sum(abs(c) ** 2 for c in self.coeffs.values())

    def chop(self, eps: float = 1e-13) -> "FourierSeries":
        """Drop numerically tiny coefficients (for numerically produced series)."""
        return FourierSeries({k: c for k, c in self.coeffs.items() if abs(c) > eps})

    # -- serialization -------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"k": k, "re": float(self.coeffs[k].real), "im": float(self.coeffs[k].imag)}
            for k in sorted(self.coeffs)
        ]

    @staticmethod
    def from_json(data: list[dict]) -> "FourierSeries":
        return FourierSeries({int(d["k"]): d["re"] + 1j * d["im"] for d in data})

    def __repr__(self):
        terms = ", ".join(f"{k}: {c:.6g}" for k, c in sorted(self.coeffs.items()))
        return f"FourierSeries({{{terms}}})"


@dataclass(frozen=True)
class AffineFourier:
    """series(t) + linear*t + constant, exactly.

    Antiderivatives of Fourier series pick up a linear term from the DC mode;
    linear == 0 iff the underlying antiderivative closes on [0, 2].
    """

    series: FourierSeries
    linear: complex = 0.0
    constant: complex = 0.0

    def eval(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = self.series.eval(t_arr) + self.linear * t_arr + self.constant
        if np.ndim(t) == 0 and np.ndim(out) != 0:
            return complex(out)
        return out

    def delta(self, t0: float, t1: float) -> complex:
        """Exact definite integral value eval(t1) - eval(t0)."""
        return complex(self.eval(float(t1)) - self.eval(float(t0)))

    def derivative(self) -> FourierSeries:
        d = self.series.derivative()
        if self.linear != 0:
            d = d + FourierSeries.basis(0, self.linear)
        return d
