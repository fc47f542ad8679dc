"""Exception types shared across the package."""

from __future__ import annotations


class DesamonError(Exception):
    """Base class for all domain-level errors."""


class ConfigError(DesamonError):
    """A configuration value or document is invalid."""


class ParseError(DesamonError):
    """An input token or file could not be parsed; message names the token."""


class InvalidInput(DesamonError):
    """An operation argument violates its contract."""


class DateOutOfRange(DesamonError):
    """A calendar date falls outside the fiscal year it was resolved against."""


class GateBlocked(DesamonError):
    """A disbursement gate is closed; carries machine-readable reasons."""

    def __init__(self, stage_number: int, reasons: tuple[str, ...]):
        self.stage_number = stage_number
        self.reasons = tuple(reasons)
        super().__init__(f"stage {stage_number} gate blocked: {'; '.join(reasons)}")


class Conflict(DesamonError):
    """The operation collides with already-committed state (retry won't help
    unless the state changes)."""


class RetryableConflict(Conflict):
    """Two writers collided on the same row set; the caller may retry."""


class NotFound(DesamonError):
    """A referenced entity does not exist."""


class EmptyScope(DesamonError):
    """An aggregation scope matched no activities (likely a misconfigured
    filter, so surfaced as an error rather than a zero result)."""


class LockHeld(DesamonError):
    """The store's advisory lock is held by another process."""
