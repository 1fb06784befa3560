"""
Rigid Symbol Toolkit - Exception Types
"""

from typing import Optional


class RigidSymError(ValueError):
    """Base class for every error raised by the toolkit"""


class PartitionParseError(RigidSymError):
    """Malformed partition or operator text"""

    def __init__(self, message: str, token: Optional[str] = None):
        self.token = token
        if token is not None:
            message = f"{message} (offending token: {token!r})"
        super().__init__(message)


class DomainError(RigidSymError):
    """Input outside the domain of an operation"""

    def __init__(self, message: str, rule: Optional[str] = None):
        self.rule = rule
        super().__init__(message)


class FixtureError(RigidSymError):
    """Fixture file missing, unreadable or malformed"""
