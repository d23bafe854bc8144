"""Shared exception types.

Validation problems (bad parameters, malformed input) and runtime caps
(deliberate size/retry limits) are kept distinct so the CLI can map them
to different exit codes.
"""


class PercolabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PercolabError):
    """Input violates a documented precondition or format."""


class CapExceeded(PercolabError):
    """A deliberate runtime cap (size limit, retry budget) was hit."""
