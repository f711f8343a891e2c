"""Filter design: ready-made weight vectors and data-driven estimation.

Weights below 1 protect a band from shrinkage, weights above 1 punish it.
Low bands usually carry the stable part of a signal and high bands the
clutter, so useful filters ramp upward; the extreme case keeps only the
zero-frequency band and forbids the rest.
"""

import numpy as np
from dataclasses import dataclass

from .errors import (
    DegenerateDeviation,
    DimensionMismatch,
    LengthMismatch,
    RatioOutOfRange,
)
from .norms import FilterVector, _band_nuclear_norms
from .tensor import Tensor3, band_count

# Hand-tuned ramp for 11 bands (tubes of length 21 or 22): spare the low
# bands, lean on the high ones.
_RAMP_11 = (0.3, 0.5, 0.6, 0.75, 0.9, 1.0, 1.05, 1.05, 1.1, 1.1, 1.1)


@dataclass(frozen=True)
class BandNormProfile:
    """Nuclear norm of every band of one tensor, in band order."""

    norms: np.ndarray
    dims: tuple[int, int, int]

    def __post_init__(self):
        arr = np.asarray(self.norms, dtype=np.float64)
        if arr.ndim != 1 or arr.size != band_count(self.dims[2]):
            raise LengthMismatch(
                f"profile for dims {self.dims} needs "
                f"{band_count(self.dims[2])} entries, got {arr.size}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "norms", arr)

    def __len__(self) -> int:
        return self.norms.size


def band_norm_profile(x: Tensor3) -> BandNormProfile:
    """Measure how much nuclear norm each band of x carries."""
    xbar = np.fft.fft(x.data, axis=2)
    return BandNormProfile(norms=_band_nuclear_norms(xbar), dims=x.dims)


def uniform_filter(count: int) -> FilterVector:
    """All-ones filter; the filtered norm degenerates to the plain tubal
    nuclear norm up to the 1/I versus 1/I3 normalization."""
    return FilterVector(np.ones(count))


def synthetic_ramp_filter() -> FilterVector:
    """Fixed 11-band ramp used for synthetic data with 11 bands."""
    return FilterVector(np.array(_RAMP_11))


def denoise_filter(noise_ratio: float) -> FilterVector:
    """Two-band filter for flat images: protect the mean plane more when
    the corruption is light, less when it is heavy.

    The first weight is 0.25 + noise_ratio clamped to [0.3, 0.6]; the
    second is 1.
    """
    if not 0.0 <= noise_ratio <= 1.0:
        raise RatioOutOfRange(f"noise ratio must be in [0, 1], got {noise_ratio}")
    low = min(max(0.25 + noise_ratio, 0.3), 0.6)
    return FilterVector(np.array([low, 1.0]))


def background_filter(count: int) -> FilterVector:
    """Keep only the zero-frequency band, forbid all others."""
    coeffs = np.full(count, np.inf)
    coeffs[0] = 0.0
    return FilterVector(coeffs)


def estimate_two_band_alpha(
    clean: BandNormProfile, corrupted: BandNormProfile
) -> FilterVector:
    """Fit a two-band filter from how corruption inflates each band.

    The first weight is the ratio of the band-1 inflation to the band-2
    inflation (so the band that grew less is shrunk less); the second
    weight is fixed at 1. The band-2 inflation must be positive, otherwise
    there is nothing to normalize by.
    """
    if len(clean) != 2 or len(corrupted) != 2:
        raise LengthMismatch("two-band estimation needs profiles of length 2")
    if clean.dims != corrupted.dims:
        raise DimensionMismatch(
            f"profiles describe different tensors: {clean.dims} vs {corrupted.dims}"
        )
    denom = corrupted.norms[1] - clean.norms[1]
    if denom <= 0:
        raise DegenerateDeviation(
            f"band-2 deviation must be > 0, got {denom:g}"
        )
    alpha1 = (corrupted.norms[0] - clean.norms[0]) / denom
    return FilterVector(np.array([alpha1, 1.0]))
