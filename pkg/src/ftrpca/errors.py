"""Exception types shared across the package.

Every error raised on purpose derives from FtrpcaError so callers (and the
CLI) can catch one base class and still tell failures apart by type.
"""


class FtrpcaError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(FtrpcaError):
    """Operands have incompatible shapes."""


class InvalidDims(FtrpcaError):
    """A requested shape is empty, negative, or otherwise unusable."""


class InvalidRank(FtrpcaError):
    """A requested tubal rank does not fit the given dimensions."""


class NonRealResult(FtrpcaError):
    """An inverse transform left a non-negligible imaginary part.

    This signals broken conjugate symmetry upstream, not a rounding issue.
    """


class BandOutOfRange(FtrpcaError):
    """A frequency-band index is outside 1..band_count(I3)."""


class SvdFailure(FtrpcaError):
    """The underlying SVD routine did not converge."""


class LengthMismatch(FtrpcaError):
    """A coefficient vector does not match the expected band count."""


class NegativeThreshold(FtrpcaError):
    """A shrinkage threshold that must be positive is not."""


class NonFinite(FtrpcaError):
    """A value or iterate contains NaN or Inf."""


class ConfigInvalid(FtrpcaError):
    """A solver configuration violates its own constraints."""


class RatioOutOfRange(FtrpcaError):
    """A fraction that must lie in [0, 1] does not."""


class DegenerateDeviation(FtrpcaError):
    """A deviation used as a denominator is zero or negative."""


class ZeroReference(FtrpcaError):
    """A reference signal needed for a relative metric is identically zero."""


class ImageTooSmall(FtrpcaError):
    """An image is too small for even a single evaluation scale."""


class IoError(FtrpcaError):
    """An underlying file operation failed."""


class BadMagic(FtrpcaError):
    """A tensor file does not start with the expected magic/version."""


class TruncatedPayload(FtrpcaError):
    """A tensor file ends before the payload its header promises."""


class UnsupportedFormat(FtrpcaError):
    """An image file is not one of the supported formats."""


class InconsistentDims(FtrpcaError):
    """Frames in a directory do not all share the same size."""


class EmptyDirectory(FtrpcaError):
    """A frame directory contains no loadable images."""
