"""Shrinkage operators and band-weighted nuclear norms.

The plain tubal nuclear norm averages the nuclear norms of all Fourier
slices and treats every frequency the same. The filtered variant weights
each frequency band by a coefficient alpha_j >= 0, with two sentinel
levels: alpha_j = 0 keeps the band untouched (it costs nothing, so the
shrinkage operator passes it through) and alpha_j = +inf forbids the band
(the shrinkage operator zeroes it outright). Neither sentinel needs an SVD,
so only bands with finite positive weight are ever decomposed.
"""

import numpy as np
from dataclasses import dataclass

from ._parallel import map_slices
from .errors import LengthMismatch, NegativeThreshold, NonFinite, SvdFailure
from .tensor import Tensor3, _ifft_real, band_count


@dataclass(frozen=True)
class FilterVector:
    """Per-band weights alpha in [0, +inf], one entry per frequency band.

    np.inf is the "band forbidden" sentinel; NaN and negatives are
    rejected.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise LengthMismatch("filter must be a nonempty 1-d vector")
        if np.isnan(arr).any():
            raise NonFinite("filter coefficients must not be NaN")
        if (arr < 0).any():
            raise NegativeThreshold("filter coefficients must be >= 0")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return self.coeffs.size

    @property
    def finite_positive_count(self) -> int:
        """Number of bands that actually require an SVD."""
        c = self.coeffs
        return int(np.count_nonzero((c > 0) & np.isfinite(c)))


def soft_threshold(x: Tensor3, tau: float) -> Tensor3:
    """Entrywise shrink toward zero: sign(x) * max(|x| - tau, 0)."""
    if tau < 0:
        raise NegativeThreshold(f"threshold must be >= 0, got {tau}")
    d = x.data
    return Tensor3(np.sign(d) * np.maximum(np.abs(d) - tau, 0.0))


def svt(m: np.ndarray, tau: float) -> np.ndarray:
    """Matrix singular value thresholding: shrink every singular value by
    tau and drop the ones that fall to zero."""
    if tau < 0:
        raise NegativeThreshold(f"threshold must be >= 0, got {tau}")
    try:
        u, sig, vh = np.linalg.svd(np.asarray(m), full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(str(exc)) from exc
    shrunk = sig - tau
    k = int(np.count_nonzero(shrunk > 0))
    if k == 0:
        return np.zeros_like(np.asarray(m))
    return (u[:, :k] * shrunk[:k]) @ vh[:k, :]


def _band_nuclear_norms(xbar: np.ndarray) -> np.ndarray:
    """Nuclear norm of each band of a spectrum, mirrors included.

    A band's norm is the sum over its one or two slices; the mirrored
    slice of a pair is the conjugate of the leading one and shares its
    singular values, so the leading norm is simply doubled.
    """
    i3 = xbar.shape[2]
    lead = band_count(i3)
    norms = np.zeros(lead)
    failures: list[str] = []

    def one(i: int) -> None:
        try:
            sig = np.linalg.svd(xbar[:, :, i], compute_uv=False)
        except np.linalg.LinAlgError as exc:
            failures.append(f"slice {i + 1}: {exc}")
            return
        mirrored = 0 < i < i3 - i
        norms[i] = (2.0 if mirrored else 1.0) * sig.sum()

    map_slices(one, lead)
    if failures:
        raise SvdFailure("; ".join(failures))
    return norms


def tnn(x: Tensor3) -> float:
    """Tubal nuclear norm: mean nuclear norm over all Fourier slices."""
    xbar = np.fft.fft(x.data, axis=2)
    return float(_band_nuclear_norms(xbar).sum() / x.dims[2])


def ftnn(x: Tensor3, alpha: FilterVector) -> float:
    """Filtered tubal nuclear norm: band norms weighted by alpha, averaged
    over the band count.

    A forbidden band (alpha_j = +inf) contributes nothing when the band is
    exactly zero and makes the whole norm +inf otherwise; the aggregation
    never multiplies inf by 0.
    """
    count = band_count(x.dims[2])
    if len(alpha) != count:
        raise LengthMismatch(f"filter has {len(alpha)} entries, need {count}")
    xbar = np.fft.fft(x.data, axis=2)
    norms = _band_nuclear_norms(xbar)
    total = 0.0
    for a, n in zip(alpha.coeffs, norms):
        if np.isinf(a):
            if n > 0.0:
                return float("inf")
        else:
            total += a * n
    return total / count


def _shrink_spectrum(
    ybar: np.ndarray, coeffs: np.ndarray, tau: float
) -> tuple[np.ndarray, int]:
    """Apply per-band singular value shrinkage to a spectrum.

    Returns the shrunk spectrum and how many SVDs were computed: bands at
    weight 0 pass through and bands at +inf become zero, both without a
    decomposition. Mirrored slices are conjugated from the leading ones.
    """
    i3 = ybar.shape[2]
    lead = band_count(i3)
    rbar = np.empty_like(ybar)
    svd_done = np.zeros(lead, dtype=np.int64)
    failures: list[str] = []

    def one(i: int) -> None:
        a = coeffs[i]
        if a == 0.0:
            rbar[:, :, i] = ybar[:, :, i]
            return
        if np.isinf(a):
            rbar[:, :, i] = 0.0
            return
        try:
            u, sig, vh = np.linalg.svd(ybar[:, :, i], full_matrices=False)
        except np.linalg.LinAlgError as exc:
            failures.append(f"slice {i + 1}: {exc}")
            return
        svd_done[i] = 1
        shrunk = sig - a * tau
        k = int(np.count_nonzero(shrunk > 0))
        if k == 0:
            rbar[:, :, i] = 0.0
        else:
            rbar[:, :, i] = (u[:, :k] * shrunk[:k]) @ vh[:k, :]

    map_slices(one, lead)
    if failures:
        raise SvdFailure("; ".join(failures))
    for i in range(lead, i3):
        rbar[:, :, i] = np.conj(rbar[:, :, i3 - i])
    return rbar, int(svd_done.sum())


def ftsvt(y: Tensor3, alpha: FilterVector, tau: float) -> Tensor3:
    """Filtered singular value shrinkage: the minimizer over Z of

        (tau / I3) * sum_i alpha_i ||Zbar^(i)||_*  +  (1/2) ||Z - Y||_F^2

    computed by shrinking each Fourier slice's singular values by
    alpha_i * tau. The 0 / +inf sentinels are handled without any SVD,
    and when every weight is 0 the input is returned untouched (no
    transform at all), so total preservation is exact.
    """
    if tau <= 0:
        raise NegativeThreshold(f"shrinkage step must be > 0, got {tau}")
    count = band_count(y.dims[2])
    if len(alpha) != count:
        raise LengthMismatch(f"filter has {len(alpha)} entries, need {count}")
    if not alpha.coeffs.any():
        return Tensor3(y.data.copy(order="F"))
    ybar = np.fft.fft(y.data, axis=2)
    rbar, _ = _shrink_spectrum(ybar, alpha.coeffs, tau)
    return Tensor3(_ifft_real(rbar, "ftsvt"))
