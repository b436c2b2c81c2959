"""Exception hierarchy shared by every module."""


class LowAccessError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(LowAccessError, ValueError):
    """Lengths, moduli or shapes do not agree."""


class CapacityError(LowAccessError):
    """An exhaustive enumeration would exceed the configured bound."""


class UndefinedNormError(LowAccessError):
    """A coordinate slice is empty, so the distance to it is undefined."""


class AmalgamationError(LowAccessError):
    """Preconditions of the amalgamated direct sum are violated."""


class RadiusBoundViolation(AssertionError):
    """A glued code measured a covering radius above r1 + r2."""


class CatalogError(LowAccessError, KeyError):
    """Unknown catalog name or bad catalog parameters."""


class CoefficientRangeError(LowAccessError, ValueError):
    """A query coefficient lies outside the supported coefficient set."""


class IntegrityError(LowAccessError):
    """A plan does not belong to the storage system it is run against."""


class PreconditionError(LowAccessError, ValueError):
    """Generic violated precondition (for instance, a set that is not an AP)."""


class DecompositionError(LowAccessError, ValueError):
    """A coefficient is not expressible in the sumset of a decomposition."""


class CodeFormatError(LowAccessError, ValueError):
    """A code file could not be parsed."""
