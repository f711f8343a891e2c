"""Recovery-quality metrics on tensors and 8-bit-range images.

psnr and rse compare whole tensors; age, peps, pceps and msssim are image
metrics and reduce color input to luminance first. All of them accept
plain arrays or Tensor3.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import (
    DimensionMismatch,
    ImageTooSmall,
    NegativeThreshold,
    ZeroReference,
)
from .tensor import Tensor3

_LUMA = (0.299, 0.587, 0.114)
_MSSSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
_WINDOW_SIDE = 11
_K1, _K2, _DYNAMIC_RANGE = 0.01, 0.03, 255.0


def _as_array(x) -> np.ndarray:
    if isinstance(x, Tensor3):
        return x.data
    return np.asarray(x, dtype=np.float64)


def _pair(ref, test) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_array(ref), _as_array(test)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def luminance(img) -> np.ndarray:
    """Reduce an image to one gray channel: 2-d input passes through,
    (H, W, 3) input becomes 0.299 R + 0.587 G + 0.114 B."""
    arr = _as_array(img)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 3:
        return arr @ np.asarray(_LUMA)
    if arr.ndim == 3 and arr.shape[2] == 1:
        return arr[:, :, 0]
    raise DimensionMismatch(
        f"expected (H, W), (H, W, 1) or (H, W, 3), got {arr.shape}"
    )


def psnr(ref, test) -> float:
    """Peak signal-to-noise ratio in dB against the reference's own peak
    magnitude; +inf for an exact match."""
    a, b = _pair(ref, test)
    peak = np.abs(a).max()
    if peak == 0.0:
        raise ZeroReference("reference is identically zero")
    err = np.linalg.norm(a - b) ** 2
    if err == 0.0:
        return float("inf")
    return float(10.0 * math.log10(a.size * peak * peak / err))


def rse(ref, test) -> float:
    """Relative squared error ||ref - test||_F / ||ref||_F."""
    a, b = _pair(ref, test)
    denom = np.linalg.norm(a)
    if denom == 0.0:
        raise ZeroReference("reference is identically zero")
    return float(np.linalg.norm(a - b) / denom)


def age(ref, test) -> float:
    """Average gray-level error: mean absolute luminance difference."""
    a, b = _pair(ref, test)
    return float(np.abs(luminance(a) - luminance(b)).mean())


def _error_mask(ref, test, threshold: float) -> np.ndarray:
    if threshold < 0:
        raise NegativeThreshold(f"threshold must be >= 0, got {threshold}")
    a, b = _pair(ref, test)
    return np.abs(luminance(a) - luminance(b)) > threshold


def peps(ref, test, threshold: float = 20.0) -> float:
    """Fraction of pixels whose luminance error exceeds the threshold."""
    return float(_error_mask(ref, test, threshold).mean())


def pceps(ref, test, threshold: float = 20.0) -> float:
    """Fraction of error pixels all of whose 4-neighbors are error pixels
    too; neighbors outside the image do not count against a pixel."""
    err = _error_mask(ref, test, threshold)
    padded = np.pad(err, 1, constant_values=True)
    clustered = (
        err
        & padded[:-2, 1:-1]
        & padded[2:, 1:-1]
        & padded[1:-1, :-2]
        & padded[1:-1, 2:]
    )
    return float(clustered.mean())


def _gaussian_window() -> np.ndarray:
    half = _WINDOW_SIDE // 2
    coords = np.arange(_WINDOW_SIDE) - half
    g = np.exp(-(coords**2) / (2.0 * 1.5**2))
    win = np.outer(g, g)
    return win / win.sum()


def _ssim_maps(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Mean structural similarity and mean contrast-structure term of one
    scale, over valid 11x11 windows."""
    win = _gaussian_window()
    c1 = (_K1 * _DYNAMIC_RANGE) ** 2
    c2 = (_K2 * _DYNAMIC_RANGE) ** 2
    mu_a = fftconvolve(a, win, mode="valid")
    mu_b = fftconvolve(b, win, mode="valid")
    var_a = fftconvolve(a * a, win, mode="valid") - mu_a * mu_a
    var_b = fftconvolve(b * b, win, mode="valid") - mu_b * mu_b
    cov = fftconvolve(a * b, win, mode="valid") - mu_a * mu_b
    lum = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1)
    cs = (2.0 * cov + c2) / (var_a + var_b + c2)
    return float((lum * cs).mean()), float(cs.mean())


def _halve(a: np.ndarray) -> np.ndarray:
    h, w = (a.shape[0] // 2) * 2, (a.shape[1] // 2) * 2
    a = a[:h, :w]
    return 0.25 * (a[0::2, 0::2] + a[1::2, 0::2] + a[0::2, 1::2] + a[1::2, 1::2])


def _signed_power(v: float, w: float) -> float:
    # slightly negative cs means can occur on adversarial pairs; a plain
    # fractional power would go complex, so keep the sign aside.
    return math.copysign(abs(v) ** w, v) if v != 0.0 else 0.0


def msssim(ref, test) -> float:
    """Multi-scale structural similarity on the 0..255 range.

    Uses up to 5 dyadic scales; scales that would shrink the short side
    below the 11-pixel window are dropped and the standard weights are
    renormalized over the ones that remain. Identical inputs score 1.
    """
    a = luminance(_as_array(ref))
    b = luminance(_as_array(test))
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    short = min(a.shape)
    scales = 0
    while scales < len(_MSSSIM_WEIGHTS) and short // (2**scales) >= _WINDOW_SIDE:
        scales += 1
    if scales == 0:
        raise ImageTooSmall(
            f"short side {short} is below the {_WINDOW_SIDE}-pixel window"
        )
    weights = np.asarray(_MSSSIM_WEIGHTS[:scales])
    weights = weights / weights.sum()
    score = 1.0
    for level in range(scales):
        mean_ssim, mean_cs = _ssim_maps(a, b)
        if level == scales - 1:
            score *= _signed_power(mean_ssim, weights[level])
        else:
            score *= _signed_power(mean_cs, weights[level])
            a, b = _halve(a), _halve(b)
    return float(score)


@dataclass(frozen=True)
class MetricsReport:
    """One row of recovery metrics for an image pair."""

    psnr: float
    rse: float
    age: float
    peps: float
    pceps: float
    msssim: float

    _FIELDS = ("psnr", "rse", "age", "peps", "pceps", "msssim")

    def to_csv(self) -> str:
        header = ",".join(self._FIELDS)
        row = ",".join(f"{getattr(self, f):.6g}" for f in self._FIELDS)
        return f"{header}\n{row}\n"

    def format_table(self) -> str:
        lines = ["metric      value", "-----------------"]
        for f in self._FIELDS:
            lines.append(f"{f:<10}  {getattr(self, f):.4f}")
        return "\n".join(lines)


def compute_metrics(ref, test, threshold: float = 20.0) -> MetricsReport:
    """All six metrics for an image pair ((H, W) gray or (H, W, 3) color).

    psnr and rse run on the raw channels, the rest on luminance.
    """
    a, b = _pair(ref, test)
    return MetricsReport(
        psnr=psnr(a, b),
        rse=rse(a, b),
        age=age(a, b),
        peps=peps(a, b, threshold),
        pceps=pceps(a, b, threshold),
        msssim=msssim(a, b),
    )
