"""Frequency-filtered robust tensor PCA."""

from .errors import (
    BadMagic,
    BandOutOfRange,
    ConfigInvalid,
    DegenerateDeviation,
    DimensionMismatch,
    EmptyDirectory,
    FtrpcaError,
    ImageTooSmall,
    InconsistentDims,
    InvalidDims,
    InvalidRank,
    IoError,
    LengthMismatch,
    NegativeThreshold,
    NonFinite,
    NonRealResult,
    RatioOutOfRange,
    SvdFailure,
    TruncatedPayload,
    UnsupportedFormat,
    ZeroReference,
)
from .filters import (
    BandNormProfile,
    background_filter,
    band_norm_profile,
    denoise_filter,
    estimate_two_band_alpha,
    synthetic_ramp_filter,
    uniform_filter,
)
from .io import load_frames, load_image, load_tensor, save_image, save_tensor
from .metrics import (
    MetricsReport,
    age,
    compute_metrics,
    msssim,
    pceps,
    peps,
    psnr,
    rse,
)
from .norms import FilterVector, ftnn, ftsvt, soft_threshold, svt, tnn
from .solver import SolverConfig, SolverResult, default_lambda, rtpca
from .synth import (
    NoiseSpec,
    add_sparse_noise,
    phantom3d,
    random_lowrank_sparse,
    synth_video,
)
from .tensor import (
    BandIndex,
    SpectralTensor,
    Tensor3,
    TsvdFactors,
    all_bands,
    band_component,
    band_count,
    band_index,
    fft_mode3,
    ifft_mode3,
    reconstruct,
    tproduct,
    tsvd,
)

__version__ = "0.1.0"

__all__ = [
    "FtrpcaError",
    "BadMagic",
    "BandOutOfRange",
    "ConfigInvalid",
    "DegenerateDeviation",
    "DimensionMismatch",
    "EmptyDirectory",
    "ImageTooSmall",
    "InconsistentDims",
    "InvalidDims",
    "InvalidRank",
    "IoError",
    "LengthMismatch",
    "NegativeThreshold",
    "NonFinite",
    "NonRealResult",
    "RatioOutOfRange",
    "SvdFailure",
    "TruncatedPayload",
    "UnsupportedFormat",
    "ZeroReference",
    "Tensor3",
    "SpectralTensor",
    "BandIndex",
    "TsvdFactors",
    "FilterVector",
    "BandNormProfile",
    "NoiseSpec",
    "SolverConfig",
    "SolverResult",
    "MetricsReport",
    "fft_mode3",
    "ifft_mode3",
    "band_count",
    "band_index",
    "all_bands",
    "band_component",
    "tproduct",
    "tsvd",
    "reconstruct",
    "soft_threshold",
    "svt",
    "tnn",
    "ftnn",
    "ftsvt",
    "rtpca",
    "default_lambda",
    "band_norm_profile",
    "uniform_filter",
    "synthetic_ramp_filter",
    "denoise_filter",
    "background_filter",
    "estimate_two_band_alpha",
    "phantom3d",
    "add_sparse_noise",
    "random_lowrank_sparse",
    "synth_video",
    "psnr",
    "rse",
    "age",
    "peps",
    "pceps",
    "msssim",
    "compute_metrics",
    "load_tensor",
    "save_tensor",
    "load_image",
    "save_image",
    "load_frames",
    "__version__",
]
