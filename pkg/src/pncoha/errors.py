"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands live over different ambient dimension vectors."""


class NotSymmetricError(ValueError):
    """A polynomial that must be slot-symmetric is not."""


class ShuffleConsistencyError(RuntimeError):
    """A shuffle sum left a nonzero remainder after clearing denominators.

    This never happens for correct input; it signals a bug.
    """


class UnsupportedQuiverError(ValueError):
    """The requested computation needs a relation-free quiver."""


class ArmIndexError(ValueError):
    """A generator refers to an arm that does not exist for this n."""


class SeriesError(ValueError):
    """Invalid input to a plethystic operation."""


class TerminationError(RuntimeError):
    """A rewrite step failed to decrease the termination measure."""
