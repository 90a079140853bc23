"""Exception hierarchy. The CLI maps each class to an exit code."""


class SobkerError(Exception):
    """Base class for all library errors."""


class DomainError(SobkerError, ValueError):
    """Invalid parameters: violated existence condition, dimension mismatch."""


class ConsistencyError(SobkerError, ArithmeticError):
    """Two routes to the same quantity disagree beyond tolerance."""


class NumericalError(SobkerError, ArithmeticError):
    """A numerical procedure could not reach its target (jitter ladder
    exhausted, tail bound unattainable)."""
