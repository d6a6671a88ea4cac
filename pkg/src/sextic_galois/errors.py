"""Exception hierarchy shared by every module of the package."""


class SexticError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SexticError, ValueError):
    """Malformed field specification, coefficient literal or CLI argument."""


class InvalidField(SexticError, ValueError):
    """Well-formed but mathematically unusable field specification."""


class UnsupportedCharacteristic(InvalidField):
    """Characteristic two (or another excluded characteristic) was requested."""


class InternalPrecisionError(SexticError, ArithmeticError):
    """Numeric search did not certify its answer before the precision cap."""


class InternalInconsistency(SexticError, AssertionError):
    """A consistency guard that can only fire on a bug has fired."""


class NoCatalog(SexticError, ValueError):
    """Subfield catalog requested for a report without a Galois group."""


class AmbiguityError(SexticError, ArithmeticError):
    """Numeric orbit values could not be separated at maximum precision."""


class ModelConstructionError(SexticError, AssertionError):
    """A permutation model failed its group-axiom or order check."""


class EmptySample(SexticError, ValueError):
    """No usable prime was available for Frobenius sampling."""


class NoCandidate(SexticError, AssertionError):
    """Every candidate group was excluded by the observed cycle types."""
