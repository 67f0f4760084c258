"""Exception hierarchy shared by every mtsf module."""

from __future__ import annotations


class MtsfError(Exception):
    """Base class for all library errors."""


class InvalidInputError(MtsfError, ValueError):
    """A precondition on the inputs does not hold."""


class SizeGuardError(InvalidInputError):
    """Brute-force enumeration requested beyond its size guard."""


class ComputationError(MtsfError, RuntimeError):
    """A numerical step failed at runtime."""
