"""Exception hierarchy.

Every error raised by the library derives from :class:`EntcohError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch
that.
"""


class EntcohError(ValueError):
    pass


class NotHermitian(EntcohError):
    pass


class NotPSD(EntcohError):
    pass


class NoConvergence(EntcohError):
    pass


class BadShape(EntcohError):
    pass


class NotNormalized(EntcohError):
    pass


class OutOfRange(EntcohError):
    pass


class BadDistribution(EntcohError):
    pass


class BadInput(EntcohError):
    pass


class BadParameters(EntcohError):
    pass


class DimensionMismatch(EntcohError):
    pass


class NotUnitary(EntcohError):
    pass


class BadBasis(EntcohError):
    pass


class RankDeficit(EntcohError):
    pass
