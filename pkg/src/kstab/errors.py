"""Exception hierarchy shared by all kstab modules."""


class KStabError(Exception):
    """Base class for every error raised by kstab."""


class DuplicateAbscissa(KStabError):
    pass


class OverdeterminedMismatch(KStabError):
    """A verification sample does not lie on the fitted polynomial.

    Usually means the sampling window starts below the point where the
    series becomes polynomial.
    """


class SamplingCapExceeded(OverdeterminedMismatch):
    """The k0 escalation reached the enumeration cap without stabilizing."""


class NonPositiveLeading(KStabError):
    """Leading coefficient a0 of the Hilbert polynomial is not positive."""


class CauchySchwarzViolation(KStabError):
    """Q * a0 < b0**2, which no genuine weight data can produce."""


class NegativeNormSquared(KStabError):
    pass


class ZeroNorm(KStabError):
    """The normalized invariant is undefined for zero-norm data."""


class DimensionMismatch(KStabError):
    pass


class DegeneratePolytope(KStabError):
    """Vertex list is not full-dimensional or not in convex position."""


class InvalidIdeal(KStabError):
    pass


class GenericFiberMismatch(KStabError):
    pass


class FixtureError(KStabError):
    """Malformed or schema-invalid fixture file."""
