"""Exception types shared across the package."""

from __future__ import annotations


class LlmOwlRError(Exception):
    """Base class for all package errors."""


class DLSyntaxError(LlmOwlRError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"syntax error at position {position}: expected {expected}")


class NonELError(LlmOwlRError):
    def __init__(self, constructor: str):
        self.constructor = constructor
        super().__init__(f"non-EL constructor: {constructor}")


class MalformedDocument(LlmOwlRError):
    pass


class SchemaError(LlmOwlRError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class OracleBoundExceeded(LlmOwlRError):
    pass


class NotEntailed(LlmOwlRError):
    pass


class UnknownName(LlmOwlRError):
    pass


class UnsupportedGoal(LlmOwlRError):
    pass


class GuardUnsatisfiable(LlmOwlRError):
    pass


class KTooLarge(LlmOwlRError):
    pass


class IncompatibleMode(LlmOwlRError):
    pass


class EmptyBatch(LlmOwlRError):
    pass


class ProviderError(LlmOwlRError):
    def __init__(self, message: str, attempts: int = 1, status: int | None = None):
        self.attempts = attempts
        self.status = status
        super().__init__(message)


class EndpointError(LlmOwlRError):
    def __init__(self, status: int | None, message: str = "", attempts: int = 1):
        self.status = status
        self.attempts = attempts
        super().__init__(f"endpoint error (status={status}): {message}")


class AuthError(EndpointError):
    pass


class EndpointTimeout(EndpointError):
    pass
