"""Exception hierarchy shared by every module of the package."""


class BiharmonicError(Exception):
    """Base class for all package errors."""


class InvalidInputError(BiharmonicError, ValueError):
    """Malformed arguments: wrong lengths, non-positive radii, off-constraint radii."""


class GeometryError(BiharmonicError, ValueError):
    """A point or vector violates an on-quadric or tangency condition.

    ``residual`` carries the size of the violated condition.
    """

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class ChartDomainError(GeometryError):
    """Chart coordinates at or beyond a chart singularity."""


class ConfigurationError(BiharmonicError, ValueError):
    """Inconsistent immersion configuration (e.g. inner/outer radius mismatch)."""


class NotApplicableError(BiharmonicError, ValueError):
    """The requested quantity does not exist for this geometry."""


class CrossCheckError(BiharmonicError, RuntimeError):
    """Closed-form and finite-difference values disagree beyond tolerance."""
