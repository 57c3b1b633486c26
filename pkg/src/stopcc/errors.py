"""Exception hierarchy shared across the package."""


class StopCCError(Exception):
    """Base class for all package errors."""


class ValidationError(StopCCError):
    """Structured data (graph, construction sequence, file) violates an invariant."""


class ParameterError(StopCCError):
    """A parameter is out of its documented domain."""


class UsageError(StopCCError):
    """An operation was called in a state or regime it does not support."""


class ResourceLimitError(StopCCError):
    """An exact computation would exceed its hard combinatorial cap."""
