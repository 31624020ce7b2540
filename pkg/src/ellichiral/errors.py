"""Shared exception types.

Truncation errors are deliberately distinct from mathematical zero: a series
coefficient outside the verified window raises instead of returning 0.
"""


class EllichiralError(Exception):
    pass


class TruncationError(EllichiralError):
    """Requested data lies outside the verified truncation window."""

    def __init__(self, message, required_order=None):
        super().__init__(message)
        self.required_order = required_order


class RegionMismatchError(EllichiralError):
    """Series arithmetic attempted across incompatible expansion regions."""


class ValidationError(EllichiralError):
    """Structure constants or presentation data violate a required identity."""


class UnsupportedError(EllichiralError):
    """Input is outside the supported range (width, preset shape, ...)."""


class ConfigError(EllichiralError):
    """Bad run configuration (unknown keys, malformed values)."""
