"""Integer Laurent polynomials in one variable t."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

__all__ = ["LaurentPoly", "torus_alexander", "det_poly_matrix"]


def _pruned(items) -> dict[int, int]:
    out: dict[int, int] = {}
    for e, c in items:
        c = int(c)
        if c != 0:
            out[int(e)] = out.get(int(e), 0) + c
    return {e: c for e, c in out.items() if c != 0}


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse integer Laurent polynomial: map exponent -> coefficient."""

    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _pruned(dict(self.coeffs).items()))

    @staticmethod
    def term(coeff: int, exp: int = 0) -> "LaurentPoly":
        return LaurentPoly({exp: coeff})

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        merged = dict(self.coeffs)
        for e, c in other.coeffs.items():
            merged[e] = merged.get(e, 0) + c
        return LaurentPoly(merged)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: other * c for e, c in self.coeffs.items()})
        prod: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                prod[e1 + e2] = prod.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(prod)

    __rmul__ = __mul__

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by t^n."""
        return LaurentPoly({e + n: c for e, c in self.coeffs.items()})

    @property
    def min_exp(self) -> int:
        return min(self.coeffs, default=0)

    @property
    def max_exp(self) -> int:
        return max(self.coeffs, default=0)

    @property
    def span(self) -> int:
        return self.max_exp - self.min_exp if self.coeffs else 0

    def reversed(self) -> "LaurentPoly":
        """Substitute t -> 1/t."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def __call__(self, t):
        return sum(c * t**e for e, c in self.coeffs.items())

    def normalized(self) -> "LaurentPoly":
        """Canonical unit multiple: exponents centered (Alexander polynomials
        of knots have even span), lowest listed coefficient positive."""
        if not self.coeffs:
            return self
        shift = -(self.min_exp + self.max_exp) // 2
        p = self.shift(shift)
        if p.coeffs[p.min_exp] < 0:
            p = -p
        return p

    def unit_equal(self, other: "LaurentPoly") -> bool:
        """Equality up to multiplication by +/- t^k."""
        return self.normalized() == other.normalized()

    def is_symmetric(self) -> bool:
        return self.normalized() == self.normalized().reversed()

    def coeff_list(self) -> list[tuple[int, int]]:
        return [(e, self.coeffs[e]) for e in sorted(self.coeffs)]

    @staticmethod
    def from_pairs(pairs) -> "LaurentPoly":
        return LaurentPoly({int(e): int(c) for e, c in pairs})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if e == 0:
                parts.append(f"{c}")
            elif abs(c) == 1:
                parts.append(("-" if c < 0 else "") + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts).replace("+ -", "- ")
        return out


def torus_alexander(p: int, q: int) -> LaurentPoly:
    """Alexander polynomial of the (p, q)-torus knot:
    (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), normalized."""
    p, q = abs(int(p)), abs(int(q))
    if p < 2 or q < 2:
        return LaurentPoly.one()

    def cyc_quot(n: int, m: int) -> dict[int, int]:
        # (t^n - 1) / (t^m - 1) = 1 + t^m + ... assuming m | n
        return {j: 1 for j in range(0, n, m)}

    a = LaurentPoly(cyc_quot(p * q, p))  # (t^{pq}-1)/(t^p-1)
    b = LaurentPoly(cyc_quot(p * q, q))
    num = a * LaurentPoly({1: 1, 0: -1})  # * (t - 1)
    # divide num by (t^q - 1): exact long division
    quot = _exact_div(num, LaurentPoly({q: 1, 0: -1}))
    assert quot is not None
    del b
    return quot.normalized()


def _exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly | None:
    """Exact Laurent division; None if not divisible."""
    if not num:
        return LaurentPoly()
    rem = dict(num.coeffs)
    de, dc = den.max_exp, den.coeffs[den.max_exp]
    out: dict[int, int] = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if c % dc != 0:
            return None
        f = c // dc
        out[e - de] = f
        for e2, c2 in den.coeffs.items():
            k = e - de + e2
            rem[k] = rem.get(k, 0) - f * c2
            if rem[k] == 0:
                del rem[k]
    return LaurentPoly(out)


# ---------------------------------------------------------------------------
# Exact determinants of matrices of small integer polynomials
# ---------------------------------------------------------------------------


def _bareiss_int_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_poly_matrix(entries: list[list[LaurentPoly]]) -> LaurentPoly:
    """Exact determinant of a matrix of integer Laurent polynomials.

    Strategy: clear t^{-1} powers row by row, evaluate the integer determinant
    at enough integer points, then interpolate exactly over the rationals.
    """
    n = len(entries)
    if n == 0:
        return LaurentPoly.one()
    rows = []
    total_shift = 0
    max_deg = 0
    for row in entries:
        low = min((p.min_exp for p in row if p), default=0)
        shift = -min(low, 0)
        total_shift += shift
        rows.append([p.shift(shift) for p in row])
        max_deg += max((p.max_exp + shift for p in row if p), default=0)
    npts = max_deg + 1
    # small symmetric evaluation points keep the integers moderate
    pts: list[int] = []
    v = 1
    while len(pts) < npts:
        pts.extend([v, -v][: npts - len(pts)])
        v += 1
    vals = []
    for x in pts:
        m = [[int(p(x)) for p in row] for row in rows]
        vals.append(_bareiss_int_det(m))
    coeffs = _interp_int(pts, vals)
    poly = LaurentPoly({e: c for e, c in enumerate(coeffs)})
    return poly.shift(-total_shift)


def _interp_int(xs: list[int], ys: list[int]) -> list[int]:
    """Exact polynomial interpolation with integer result (Newton form)."""
    n = len(xs)
    divided = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form
    coeffs = [Fraction(0)] * n
    acc = [Fraction(1)] + [Fraction(0)] * (n - 1)  # running product poly
    for j in range(n):
        for i in range(n):
            coeffs[i] += divided[j] * acc[i]
        if j < n - 1:
            # acc *= (x - xs[j])
            new = [Fraction(0)] * n
            for i in range(n - 1):
                new[i + 1] += acc[i]
                new[i] -= acc[i] * xs[j]
            new[n - 1] -= 0
            acc = new
    out = []
    for c in coeffs:
        assert c.denominator == 1, "interpolation did not yield integers"
        out.append(int(c))
    return out
