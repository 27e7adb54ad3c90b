"""Exception hierarchy shared by every skyway module.

The CLI maps :class:`InputError` subclasses to exit code 3 and
:class:`InfeasibleError` subclasses to exit code 2.
"""

from __future__ import annotations


class SkywayError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SkywayError):
    """Bad input data or configuration."""


class ParseError(InputError):
    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")


class IntegrityError(InputError):
    """Structurally invalid network or record set."""


class ConfigurationError(InputError):
    pass


class NodeNotFoundError(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "unknown node"


class ContractViolation(SkywayError, ValueError):
    """A caller broke an operation's precondition."""


class InfeasibleError(SkywayError):
    """The request is well-formed but cannot be served."""


class InfeasibleExtractionError(InfeasibleError):
    pass


class NoCapableDroneError(InfeasibleError):
    pass


class InfeasibleServiceError(InfeasibleError):
    """Payload exceeds the drone's capacity."""


class SegmentInfeasibleError(InfeasibleError):
    """A leg needs more battery than a full charge minus the reserve."""


class UnreachableDestinationError(InfeasibleError):
    pass


class InfeasiblePlanError(InfeasibleError):
    pass
