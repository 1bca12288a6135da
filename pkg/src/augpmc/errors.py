"""Exception hierarchy shared across the package."""


class AugpmcError(Exception):
    """Base class for all package-specific errors."""


class AllWeightsZeroError(AugpmcError):
    """Every particle log-weight is -inf.

    Signals particle-filter collapse.  Callers convert this into a
    likelihood estimate of -inf (PMMH auto-reject) rather than crashing.
    """


class InvalidSimplexError(AugpmcError):
    """A probability vector has negative entries or does not sum to 1."""


class DomainError(AugpmcError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatchError(AugpmcError):
    """Array or trajectory lengths are inconsistent."""


class MissingSuffStatsError(AugpmcError):
    """The model provides no sufficient-statistics support for particle learning."""


class InvalidStateError(AugpmcError):
    """A retained trajectory has zero likelihood under the model."""


class InvalidLabelError(AugpmcError):
    """A cluster label exceeds the number of admissible labels."""


class DuplicateMemberError(AugpmcError):
    """A subset of individuals contains repeated indices."""


class CollapseDominatedError(AugpmcError):
    """Too many pilot particle-filter runs collapsed to tune a particle count."""


class DegenerateSeriesError(AugpmcError):
    """A chain series has zero variance, so autocorrelations are undefined."""


class ConfigError(AugpmcError):
    """An experiment configuration is malformed or internally inconsistent."""
