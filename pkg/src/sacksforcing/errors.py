"""Shared exception types.

Everything raised intentionally by this package derives from EngineError,
so callers (the CLI in particular) can distinguish a failed operation from
a genuine bug.
"""


class EngineError(Exception):
    """Base class for all operation failures raised by this package."""


class PreconditionError(EngineError, ValueError):
    """An operation was called on arguments outside its stated domain."""


class AmalgamationError(PreconditionError):
    """The graft argument is not a subtree of the addressed cell."""


class FusionError(PreconditionError):
    """A sequence handed to fusion_prefix violates its schedule."""


class IncompatibleError(PreconditionError):
    """Two conditions that should be comparable have mismatched shapes."""


class DecodeError(EngineError, ValueError):
    """A census, pattern, or serialized object fails its shape checks."""


class ParseError(EngineError, ValueError):
    """Formula text could not be parsed; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResourceError(EngineError):
    """A computation was aborted because it exceeds the practical bounds."""


class InputError(EngineError, ValueError):
    """CLI input JSON does not match the expected schema for an operation."""
