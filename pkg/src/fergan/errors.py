"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 1, anything else raised
during a run -> 2, a sweep that kept partial results -> 3.
"""


class FerganError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(FerganError):
    """Invalid configuration or infeasible preconditions known before running."""


class ManifestError(FerganError):
    """A manifest file is missing, malformed, or references bad data."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class InfeasibleSplitError(ConfigError):
    """The requested split cannot be satisfied by the available identities."""


class PoolExhaustedError(FerganError):
    """The generated-identity pool is too small for the requested mix."""


class TrainingDivergedError(FerganError):
    """A non-finite loss was encountered; training aborted."""


class CrossDatabaseLeakError(FerganError):
    """The held-out corpus overlaps a training manifest."""

    def __init__(self, identities=(), paths=()):
        self.identities = sorted(identities)
        self.paths = sorted(paths)
        parts = []
        if self.identities:
            parts.append(f"shared identities: {', '.join(self.identities)}")
        if self.paths:
            parts.append(f"shared image paths: {', '.join(self.paths)}")
        super().__init__(
            "held-out corpus is not blind to training: " + "; ".join(parts)
        )
