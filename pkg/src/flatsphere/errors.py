"""Exception hierarchy shared by all modules."""


class FlatsphereError(Exception):
    """Base class for library errors."""


class DomainError(FlatsphereError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(FlatsphereError, ValueError):
    """Invalid parameters or run configuration."""


class UnsupportedDimensionError(FlatsphereError, NotImplementedError):
    """The operation is only implemented for the 2-sphere."""


class DimensionMismatchError(FlatsphereError, ValueError):
    pass


class ResourceError(FlatsphereError, MemoryError):
    """A requested size exceeds a configured cap."""


class RankDeficiencyError(FlatsphereError, ArithmeticError):
    """Too few independent candidate columns for Fekete selection."""


class NotPositiveDefiniteError(FlatsphereError, ArithmeticError):
    """The Gramian is singular or indefinite: the node set fails the Riesz test."""

    def __init__(self, message, lam_min=None, lam_max=None):
        super().__init__(message)
        self.lam_min = lam_min
        self.lam_max = lam_max


class VerificationError(FlatsphereError, ArithmeticError):
    """A post-construction identity check failed."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InsufficientDataError(FlatsphereError, ValueError):
    pass


class ResolutionError(FlatsphereError, ValueError):
    """Probe mesh too coarse for the band limit being measured."""


class FormatError(FlatsphereError, ValueError):
    """Unreadable or unknown-version file."""
