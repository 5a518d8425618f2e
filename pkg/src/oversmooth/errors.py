"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """A graph/dataset text file violates its format."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class NumericalError(RuntimeError):
    """A computation produced numerically invalid results (NaN/Inf, failed residual)."""

    def __init__(self, message: str, layer: int | None = None, residual: float | None = None):
        super().__init__(message)
        self.layer = layer
        self.residual = residual


class InsufficientDataError(ValueError):
    """Not enough usable data points for a fit."""
