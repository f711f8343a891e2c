"""On-disk formats: the raw tensor container and 8-bit images.

Tensor container layout, all little-endian:

    bytes 0..3   magic "FT3D"
    byte  4      format version (currently 1)
    bytes 5..16  three uint32 dimensions I1, I2, I3
    rest         I1*I2*I3 float64 values, first index fastest

Images go through Pillow and are restricted to 8-bit grayscale or RGB in
PNG and portable-map containers.
"""

import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    BadMagic,
    EmptyDirectory,
    InconsistentDims,
    InvalidDims,
    IoError,
    TruncatedPayload,
    UnsupportedFormat,
)
from .metrics import luminance
from .tensor import Tensor3

MAGIC = b"FT3D"
VERSION = 1
_HEADER = struct.Struct("<4sBIII")
_IMAGE_SUFFIXES = {".png", ".ppm", ".pgm"}


def save_tensor(x: Tensor3, path) -> None:
    i1, i2, i3 = x.dims
    header = _HEADER.pack(MAGIC, VERSION, i1, i2, i3)
    payload = np.ascontiguousarray(
        x.data.ravel(order="F"), dtype="<f8"
    ).tobytes()
    try:
        Path(path).write_bytes(header + payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_tensor(path) -> Tensor3:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise BadMagic(f"{path}: too short for a tensor header")
    magic, version, i1, i2, i3 = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise BadMagic(f"{path}: unsupported version {version}")
    if min(i1, i2, i3) < 1:
        raise InvalidDims(f"{path}: empty dimensions {(i1, i2, i3)}")
    expected = i1 * i2 * i3 * 8
    got = len(raw) - _HEADER.size
    if got != expected:
        raise TruncatedPayload(
            f"{path}: header promises {expected} payload bytes, found {got}"
        )
    values = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    return Tensor3(values.reshape((i1, i2, i3), order="F").copy(order="F"))


def _check_suffix(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix not in _IMAGE_SUFFIXES:
        raise UnsupportedFormat(
            f"{path}: expected one of {sorted(_IMAGE_SUFFIXES)}"
        )
    return suffix


def load_image(path) -> Tensor3:
    """Read an image as an (H, W, 3) tensor of float64 in 0..255.

    Grayscale input is replicated across the three slices. Only 8-bit
    L or RGB content is accepted; anything with alpha, palettes or
    deeper channels is rejected.
    """
    _check_suffix(path)
    try:
        with Image.open(path) as img:
            if img.mode not in ("L", "RGB"):
                raise UnsupportedFormat(
                    f"{path}: mode {img.mode} not supported, need L or RGB"
                )
            arr = np.asarray(img, dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise IoError(f"cannot decode {path}: {exc}") from exc
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    return Tensor3(arr)


def save_image(img, path) -> None:
    """Write a tensor or array as an 8-bit image, clipping to 0..255.

    (H, W, 3) data becomes RGB, (H, W) or (H, W, 1) grayscale. .pgm
    requires grayscale data; grayscale data aimed at .ppm is promoted
    to RGB.
    """
    suffix = _check_suffix(path)
    arr = img.data if isinstance(img, Tensor3) else np.asarray(img, np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise InvalidDims(f"cannot save shape {arr.shape} as an image")
    quantized = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    if arr.ndim == 2:
        if suffix == ".ppm":
            quantized = np.repeat(quantized[:, :, None], 3, axis=2)
            pil = Image.fromarray(quantized, "RGB")
        else:
            pil = Image.fromarray(quantized, "L")
    else:
        if suffix == ".pgm":
            raise UnsupportedFormat(f"{path}: .pgm cannot hold RGB data")
        pil = Image.fromarray(quantized, "RGB")
    try:
        pil.save(path)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_frames(directory) -> Tensor3:
    """Stack every image in a directory, sorted by name, into an
    (H, W, F) grayscale tensor."""
    root = Path(directory)
    try:
        entries = sorted(
            p for p in root.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES
        )
    except OSError as exc:
        raise IoError(f"cannot list {directory}: {exc}") from exc
    if not entries:
        raise EmptyDirectory(f"{directory}: no {sorted(_IMAGE_SUFFIXES)} files")
    frames = []
    shape = None
    for p in entries:
        gray = luminance(load_image(p))
        if shape is None:
            shape = gray.shape
        elif gray.shape != shape:
            raise InconsistentDims(
                f"{p}: frame is {gray.shape}, first frame was {shape}"
            )
        frames.append(gray)
    return Tensor3(np.stack(frames, axis=2))
