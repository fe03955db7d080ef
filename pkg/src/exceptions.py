"""
Exception hierarchy shared by the arithmetic kernels and the scenario runner.
"""
from typing import Optional


class RegulatorError(Exception):
    """Base class for every error raised by this package."""


class PrecisionError(RegulatorError):
    """An operation cannot certify the requested number of digits."""


class FieldMismatchError(RegulatorError):
    """Operands live in different fields (or different precisions of one field)."""


class UnsupportedCaseError(RegulatorError):
    """The requested case is outside what is implemented (e.g. wild Hilbert symbols)."""


class MembershipError(RegulatorError):
    """A symbol expected to have trivial tame symbols does not."""


class PeriodicityError(RegulatorError):
    """A theta product violates the q-periodicity condition."""


class DomainError(RegulatorError):
    """An argument lies on a degenerate locus (0, 1, q^Z, ...)."""


class QuadratureError(RegulatorError):
    """Numerical integration did not settle within the tolerance ladder."""


class ScenarioParseError(RegulatorError):
    """A scenario file could not be parsed or validated."""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        where = path or "<scenario>"
        if line is not None:
            where = f"{where}:{line}:{column if column is not None else 1}"
        super().__init__(f"{where}: {message}")
