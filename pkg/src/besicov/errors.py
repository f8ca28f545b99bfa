"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: validation problems exit
with 2, cross-check disagreements with 3, resource-cap violations with 4.
"""


class BesicovError(Exception):
    """Base class for all package errors."""


class ValidationError(BesicovError):
    """Malformed input: spec documents, parameters out of range, bad grids."""

    exit_code = 2


class CrossCheckError(BesicovError):
    """Two independent computation paths disagreed.

    The identities connecting the computation paths are exact, so any
    disagreement is a bug and is never downgraded to a warning.
    """

    exit_code = 3


class ResourceCapError(BesicovError):
    """A configured cap (subset enumeration, period memory, ...) was exceeded."""

    exit_code = 4


class CertificationError(ResourceCapError):
    """A requested enclosure cannot be certified at the given truncation."""
