"""Exception hierarchy for rodlab."""


class RodlabError(Exception):
    """Base class for all rodlab errors."""


class DegenerateQuaternion(RodlabError):
    """The quaternionic path vanishes somewhere on the sample grid."""


class BadInterval(RodlabError):
    """Interval endpoints are outside [0, 2] or out of order."""


class DegenerateSpeed(RodlabError):
    """Speed is not strictly positive, so arclength reparameterization fails."""


class MixedParity(RodlabError):
    """Operation requires a pure-parity (closed or anticlosed) path."""


class RankDeficient(RodlabError):
    """Gram matrix is numerically singular; retraction undefined."""


class NoConvergence(RodlabError):
    """Gradient flow hit the iteration cap before reaching tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NotInStiefel(RodlabError):
    """Constructed path violates the orthonormality constraints."""


class NotCritical(RodlabError):
    """Path is not of solution form (second-derivative fit residual too large)."""


class AmbiguousForm(RodlabError):
    """Normal form required the documented tie-break beyond the cross-section rules."""


class BadParity(RodlabError):
    """Integer parameters violate the c = d (mod 2) parity condition."""


class DegenerateFamily(RodlabError):
    """Family parameters (h, k) degenerate (h, k, or h+k is zero)."""


class GcdViolation(RodlabError):
    """Knot prediction requires gcd(h, h+k) = gcd(k, h+k) = 1."""


class ContinuumCoincidence(RodlabError):
    """Self-coincidences form curves in (t0, t1)-space (multiply covered base curve)."""


class NonGenericProjection(RodlabError):
    """No generic projection direction found within the retry budget."""


class NotEmbedded(RodlabError):
    """Base curve has (or is too close to) a self-intersection."""


class NotAKnot(RodlabError):
    """Diagram has more than one component."""


class ComponentsIntersect(RodlabError):
    """Base curve and pushoff are not disjoint."""
