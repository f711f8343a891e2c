"""Third-order tensor algebra in the mode-3 Fourier domain.

A tensor X of shape (I1, I2, I3) is treated as a stack of frontal slices
X[:, :, k] whose tubes X[i, j, :] are transformed by an unnormalized DFT
(numpy's forward convention; the inverse carries the 1/I3 factor). For real
input the transformed slices come in conjugate pairs: slice 1 is real and
slice i pairs with slice I3-i+2 (1-based). A "band" is one such pair (or a
single self-paired slice), so there are ceil((I3+1)/2) bands.

The t-product multiplies tensors slice-by-slice in the Fourier domain, and
the t-SVD factors each Fourier slice by an ordinary matrix SVD. Only the
leading band slices are ever decomposed; their mirrors are filled in by
conjugation, which keeps results exactly conjugate-symmetric and halves the
work.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import map_slices
from .errors import (
    BandOutOfRange,
    DimensionMismatch,
    InvalidDims,
    NonFinite,
    NonRealResult,
    SvdFailure,
)

_SYMMETRY_RTOL = 1e-9
_REAL_RTOL = 1e-8


@dataclass(frozen=True)
class Tensor3:
    """Real dense 3-order tensor, float64, entries stored with the first
    index fastest (Fortran layout)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise InvalidDims(f"expected 3 dimensions, got {arr.ndim}")
        if min(arr.shape) < 1:
            raise InvalidDims(f"all dimensions must be >= 1, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise NonFinite("tensor entries must be finite")
        object.__setattr__(self, "data", np.asfortranarray(arr))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape

    @classmethod
    def zeros(cls, dims: tuple[int, int, int]) -> "Tensor3":
        return cls(np.zeros(dims, order="F"))


@dataclass(frozen=True)
class SpectralTensor:
    """Complex tensor of mode-3 DFT coefficients.

    origin_real marks spectra of real tensors; those must satisfy the
    conjugate-pairing of slices, which is checked at construction.
    """

    data: np.ndarray
    origin_real: bool = False

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.complex128)
        if arr.ndim != 3:
            raise InvalidDims(f"expected 3 dimensions, got {arr.ndim}")
        if min(arr.shape) < 1:
            raise InvalidDims(f"all dimensions must be >= 1, got {arr.shape}")
        object.__setattr__(self, "data", np.asfortranarray(arr))
        if self.origin_real:
            self._check_symmetry()

    def _check_symmetry(self):
        arr = self.data
        scale = np.abs(arr).max() if arr.size else 0.0
        tol = _SYMMETRY_RTOL * scale
        err = np.abs(arr[:, :, 0].imag).max()
        if arr.shape[2] > 1:
            rest = arr[:, :, 1:]
            err = max(err, np.abs(rest - np.conj(rest[:, :, ::-1])).max())
        if err > tol:
            raise NonRealResult(
                f"conjugate symmetry violated: deviation {err:.3e} "
                f"exceeds {tol:.3e}"
            )

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class BandIndex:
    """One frequency band: its 1-based number and the slice(s) it owns.

    slice_hi is None for self-paired bands (the zero-frequency band, and
    the middle slice when I3 is even).
    """

    j: int
    slice_lo: int
    slice_hi: int | None


def band_count(i3: int) -> int:
    """Number of frequency bands for tube length i3: ceil((i3 + 1) / 2)."""
    if i3 < 1:
        raise InvalidDims(f"tube length must be >= 1, got {i3}")
    return (i3 + 2) // 2


def band_index(j: int, i3: int) -> BandIndex:
    """Resolve band number j (1-based) to its slice bookkeeping."""
    count = band_count(i3)
    if not 1 <= j <= count:
        raise BandOutOfRange(f"band {j} outside 1..{count} for tube length {i3}")
    if j == 1:
        return BandIndex(1, 1, None)
    mirror = i3 - j + 2
    if mirror == j:
        return BandIndex(j, j, None)
    return BandIndex(j, j, mirror)


def all_bands(i3: int) -> list[BandIndex]:
    return [band_index(j, i3) for j in range(1, band_count(i3) + 1)]


def fft_mode3(x: Tensor3) -> SpectralTensor:
    """DFT along every tube (unnormalized forward transform)."""
    return SpectralTensor(np.fft.fft(x.data, axis=2), origin_real=True)


def _ifft_real(zbar: np.ndarray, context: str) -> np.ndarray:
    """Inverse mode-3 DFT that must land on a real tensor.

    The imaginary residue is measured against the Parseval norm of the
    spectrum; anything above 1e-8 relative means the spectrum lost its
    conjugate symmetry and the caller has a bug, so this raises instead
    of silently discarding.
    """
    z = np.fft.ifft(zbar, axis=2)
    scale = np.linalg.norm(zbar) / math.sqrt(zbar.shape[2])
    residue = np.linalg.norm(z.imag)
    if residue > _REAL_RTOL * scale:
        raise NonRealResult(
            f"{context}: imaginary residue {residue:.3e} exceeds "
            f"{_REAL_RTOL:.0e} * {scale:.3e}"
        )
    return z.real


def ifft_mode3(s: SpectralTensor) -> Tensor3:
    """Inverse of fft_mode3; raises NonRealResult if the spectrum does not
    describe a real tensor."""
    return Tensor3(_ifft_real(s.data, "ifft_mode3"))


def band_component(x: Tensor3, j: int) -> Tensor3:
    """Time-domain signal carried by band j alone.

    Keeps the band's slice pair in the spectrum, zeroes everything else,
    and transforms back. Components over all bands sum to x, and the
    component of band 1 is the tube-mean of x repeated along mode 3.
    """
    band = band_index(j, x.dims[2])
    zbar = np.fft.fft(x.data, axis=2)
    keep = np.zeros_like(zbar)
    keep[:, :, band.slice_lo - 1] = zbar[:, :, band.slice_lo - 1]
    if band.slice_hi is not None:
        keep[:, :, band.slice_hi - 1] = zbar[:, :, band.slice_hi - 1]
    return Tensor3(_ifft_real(keep, f"band_component({j})"))


def tproduct(a: Tensor3, b: Tensor3) -> Tensor3:
    """Tensor-tensor product: slice-wise matrix product in the Fourier
    domain, i.e. circular convolution along the tubes."""
    i1, k1, i3 = a.dims
    k2, i2, j3 = b.dims
    if k1 != k2 or i3 != j3:
        raise DimensionMismatch(
            f"cannot multiply {a.dims} by {b.dims}: need (I1,K,I3)x(K,I2,I3)"
        )
    abar = np.fft.fft(a.data, axis=2).transpose(2, 0, 1)
    bbar = np.fft.fft(b.data, axis=2).transpose(2, 0, 1)
    cbar = np.matmul(abar, bbar).transpose(1, 2, 0)
    return Tensor3(_ifft_real(cbar, "tproduct"))


@dataclass(frozen=True)
class TsvdFactors:
    """Orthogonal-diagonal-orthogonal factorization X = U * S * V^T under
    the t-product. S is f-diagonal: every frontal slice is diagonal."""

    u: Tensor3
    s: Tensor3
    v: Tensor3


def tsvd(x: Tensor3) -> TsvdFactors:
    """Full t-SVD via one matrix SVD per leading Fourier slice.

    Singular tubes come out in the order numpy's SVD emits per slice
    (non-increasing); mirrored slices reuse the leading decompositions by
    conjugation rather than being recomputed.
    """
    i1, i2, i3 = x.dims
    lead = band_count(i3)
    xbar = np.fft.fft(x.data, axis=2)
    ubar = np.empty((i1, i1, i3), dtype=np.complex128, order="F")
    sbar = np.zeros((i1, i2, i3), dtype=np.complex128, order="F")
    vbar = np.empty((i2, i2, i3), dtype=np.complex128, order="F")
    failures: list[str] = []

    def decompose(i: int) -> None:
        try:
            u, sig, vh = np.linalg.svd(xbar[:, :, i], full_matrices=True)
        except np.linalg.LinAlgError as exc:
            failures.append(f"slice {i + 1}: {exc}")
            return
        ubar[:, :, i] = u
        k = sig.shape[0]
        sbar[:k, :k, i] = np.diag(sig)
        vbar[:, :, i] = vh.conj().T

    map_slices(decompose, lead)
    if failures:
        raise SvdFailure("; ".join(failures))
    for i in range(lead, i3):
        m = i3 - i
        ubar[:, :, i] = np.conj(ubar[:, :, m])
        sbar[:, :, i] = sbar[:, :, m]
        vbar[:, :, i] = np.conj(vbar[:, :, m])
    return TsvdFactors(
        u=Tensor3(_ifft_real(ubar, "tsvd U")),
        s=Tensor3(_ifft_real(sbar, "tsvd S")),
        v=Tensor3(_ifft_real(vbar, "tsvd V")),
    )


def reconstruct(f: TsvdFactors) -> Tensor3:
    """Multiply t-SVD factors back together: U * S * V^T."""
    i1 = f.u.dims[0]
    i2 = f.v.dims[0]
    i3 = f.u.dims[2]
    if f.s.dims != (i1, i2, i3) or f.u.dims[1] != i1 or f.v.dims[1] != i2:
        raise DimensionMismatch(
            f"inconsistent factor shapes {f.u.dims}, {f.s.dims}, {f.v.dims}"
        )
    ubar = np.fft.fft(f.u.data, axis=2).transpose(2, 0, 1)
    sbar = np.fft.fft(f.s.data, axis=2).transpose(2, 0, 1)
    vbar = np.fft.fft(f.v.data, axis=2).transpose(2, 0, 1)
    xbar = np.matmul(np.matmul(ubar, sbar), vbar.conj().transpose(0, 2, 1))
    return Tensor3(_ifft_real(xbar.transpose(1, 2, 0), "reconstruct"))
