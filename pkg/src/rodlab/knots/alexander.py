"""Alexander polynomial from a crossing diagram.

The arc/crossing relation matrix comes from the Wirtinger presentation with
the abelianization x -> t.  Rows (one per crossing, over-arc o, incoming
under-arc i, outgoing under-arc j):

    positive:  o: 1 - t,   i: t,   j: -1
    negative:  o: t - 1,   i: 1,   j: -t

Deleting one row and one column and taking the exact determinant gives the
polynomial up to units; it is then put in the symmetric normal form.
"""

from __future__ import annotations

from ..errors import NotAKnot
from .laurent import LaurentPoly, det_poly_matrix, torus_alexander

__all__ = ["alexander_from_crossings", "determinant_value", "identify_torus"]


def alexander_from_crossings(
    crossings: list[tuple[int, int, int, int]], n_arcs: int
) -> LaurentPoly:
    """crossings: (over_arc, in_arc, out_arc, sign) with arcs in [0, n_arcs)."""
    n = len(crossings)
    if n == 0:
        return LaurentPoly.one()
    if n_arcs != n:
        raise NotAKnot(f"{n} crossings but {n_arcs} arcs; not a single closed component")
    one_minus_t = LaurentPoly({0: 1, 1: -1})
    t = LaurentPoly({1: 1})
    one = LaurentPoly.one()
    rows = []
    for o, i, j, sign in crossings:
        row = [LaurentPoly() for _ in range(n_arcs)]
        if sign > 0:
            row[o] = row[o] + one_minus_t
            row[i] = row[i] + t
            row[j] = row[j] - one
        else:
            row[o] = row[o] - one_minus_t
            row[i] = row[i] + one
            row[j] = row[j] - t
        rows.append(row)
    minor = [row[: n_arcs - 1] for row in rows[: n - 1]]
    poly = det_poly_matrix(minor)
    if not poly:
        return poly
    return poly.normalized()


def determinant_value(poly: LaurentPoly) -> int:
    """Knot determinant |Delta(-1)|."""
    return abs(int(poly(-1)))


def identify_torus(
    poly: LaurentPoly, max_q: int = 13
) -> tuple[int, int] | None:
    """Match against torus-knot Alexander polynomials for 2 <= p < q <= max_q.

    Chirality is invisible to the Alexander polynomial, so a match means
    "T(p, q) up to mirror image".  Returns None when nothing matches
    (including the unknot polynomial, which is not a torus knot proper).
    """
    from math import gcd

    normd = poly.normalized()
    for p in range(2, max_q):
        for q in range(p + 1, max_q + 1):
            if gcd(p, q) != 1:
                continue
            if normd == torus_alexander(p, q):
                return (p, q)
    return None
