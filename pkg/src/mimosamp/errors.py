"""Exception types shared across the library."""

from __future__ import annotations


class MimoSampError(Exception):
    """Base class for all library-specific errors."""


class InsufficientChannelsError(MimoSampError):
    """Fewer output channels than input channels; recovery is impossible."""


class OutOfBandError(MimoSampError):
    """A frequency index falls outside the plan's band."""


class CapacityError(MimoSampError):
    """A requested truncation exceeds what a signal's coefficients cover."""


class SingularSystemError(MimoSampError):
    """The folded system matrix is rank deficient at one or more bins."""

    def __init__(self, deficient: list[int]):
        self.deficient = list(deficient)
        shown = ", ".join(str(n) for n in self.deficient[:8])
        more = "" if len(self.deficient) <= 8 else f", ... ({len(self.deficient)} total)"
        super().__init__(f"rank-deficient folded matrix at frequency bins: {shown}{more}")


class InvalidInverseError(MimoSampError):
    """A supplied left-inverse table fails the inverse identity."""


class ConfigError(MimoSampError):
    """Invalid experiment configuration."""
