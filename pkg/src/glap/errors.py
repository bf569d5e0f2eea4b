"""Exception types shared across the package.

Every error raised on purpose derives from GlapError so callers (and the
CLI) can distinguish "bad input / failed precondition" from genuine bugs.
"""


class GlapError(Exception):
    pass


# exact linear algebra
class NotSymmetric(GlapError):
    pass


# composition algebras
class DimTooLarge(GlapError):
    pass


class AlgebraMismatch(GlapError):
    pass


# graded Lie algebra core
class DimensionMismatch(GlapError):
    pass


class NonNegativeDegreePresent(GlapError):
    pass


class ParseError(GlapError):
    """Raised on malformed input files; message carries position info."""


class DegenerateForm(GlapError):
    pass


# prolongation
class NotFundamental(GlapError):
    pass


class EtaVanishesOnE(GlapError):
    """Internal consistency failure: the grading derivation must rescale g."""


class StepLimitExceeded(GlapError):
    pass


# structure analysis
class NotSemisimple(GlapError):
    pass


class NotIsotropic(GlapError):
    pass


class DegeneratePairing(GlapError):
    pass


class NoCartanTag(GlapError):
    pass


# families / oracle
class BadParameters(GlapError):
    pass


class UnsupportedType(GlapError):
    pass
