"""Synthetic test data: 3-d head phantom, planted low-rank + sparse
problems, and a toy surveillance clip.

All randomness flows through numpy's PCG64 generator seeded from an
explicit SeedSequence; independent draws (positions vs values vs signs)
use spawned child streams so adding one draw never shifts another.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, InvalidDims, InvalidRank, RatioOutOfRange
from .tensor import Tensor3, tproduct

# Ten ellipsoids of the modified head phantom, one row each:
# additive value, half-axes (a, b, c), center (x0, y0, z0), Euler angles
# (phi, theta, psi) in degrees.
ELLIPSOIDS = (
    (1.0, 0.6900, 0.920, 0.810, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.780, 0.0, -0.0184, 0.0, 0.0, 0.0, 0.0),
    (-0.2, 0.1100, 0.310, 0.220, 0.22, 0.0, 0.0, -18.0, 0.0, 10.0),
    (-0.2, 0.1600, 0.410, 0.280, -0.22, 0.0, 0.0, 18.0, 0.0, 10.0),
    (0.1, 0.2100, 0.250, 0.410, 0.0, 0.35, -0.15, 0.0, 0.0, 0.0),
    (0.1, 0.0460, 0.046, 0.050, 0.0, 0.10, 0.25, 0.0, 0.0, 0.0),
    (0.1, 0.0460, 0.046, 0.050, 0.0, -0.10, 0.25, 0.0, 0.0, 0.0),
    (0.1, 0.0460, 0.023, 0.050, -0.08, -0.605, 0.0, 0.0, 0.0, 0.0),
    (0.1, 0.0230, 0.023, 0.200, 0.0, -0.606, 0.0, 0.0, 0.0, 0.0),
    (0.1, 0.0230, 0.046, 0.200, 0.06, -0.605, 0.0, 0.0, 0.0, 0.0),
)


def _euler_matrix(phi: float, theta: float, psi: float) -> np.ndarray:
    """Z1-X2-Z3 rotation from degrees."""
    cphi, sphi = math.cos(math.radians(phi)), math.sin(math.radians(phi))
    cth, sth = math.cos(math.radians(theta)), math.sin(math.radians(theta))
    cpsi, spsi = math.cos(math.radians(psi)), math.sin(math.radians(psi))
    return np.array(
        [
            [
                cpsi * cphi - cth * sphi * spsi,
                cpsi * sphi + cth * cphi * spsi,
                spsi * sth,
            ],
            [
                -spsi * cphi - cth * sphi * cpsi,
                -spsi * sphi + cth * cphi * cpsi,
                cpsi * sth,
            ],
            [sth * sphi, -sth * cphi, cth],
        ]
    )


def _phantom_slice(grid: np.ndarray, z: float) -> np.ndarray:
    """Evaluate the phantom on one z plane of the [-1, 1]^3 cube."""
    n = grid.size
    gx, gy = np.meshgrid(grid, grid, indexing="ij")
    coords = np.stack([gx.ravel(), gy.ravel(), np.full(n * n, z)])
    out = np.zeros(n * n)
    for value, a, b, c, x0, y0, z0, phi, theta, psi in ELLIPSOIDS:
        rotated = _euler_matrix(phi, theta, psi) @ coords
        q = (
            ((rotated[0] - x0) / a) ** 2
            + ((rotated[1] - y0) / b) ** 2
            + ((rotated[2] - z0) / c) ** 2
        )
        out[q <= 1.0] += value
    return out.reshape(n, n)


def phantom3d(size: int, frames: int) -> Tensor3:
    """Head phantom rendered on a centered block of `frames` consecutive
    z planes, rescaled to [0, 255].

    Consecutive planes keep neighbouring frontal slices strongly
    correlated, which is what makes the volume a useful low-tubal-rank
    target: frames == size covers every plane and frames == 1 picks the
    middle one. Only the selected planes are evaluated; the result
    matches slicing a full render.
    """
    if size < 8:
        raise InvalidDims(f"size must be >= 8, got {size}")
    if not 1 <= frames <= size:
        raise InvalidDims(f"frames must be in 1..size, got {frames}")
    grid = np.linspace(-1.0, 1.0, size)
    start = (size - frames) // 2
    vol = np.empty((size, size, frames), order="F")
    for k in range(frames):
        vol[:, :, k] = _phantom_slice(grid, grid[start + k])
    lo, hi = vol.min(), vol.max()
    if hi > lo:
        vol = (vol - lo) * (255.0 / (hi - lo))
    else:
        vol = np.zeros_like(vol)
    return Tensor3(vol)


@dataclass(frozen=True)
class NoiseSpec:
    """Salt-and-pepper style corruption: replace a fraction of entries by
    uniform draws from [low, high]."""

    ratio: float
    low: float = 0.0
    high: float = 255.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise RatioOutOfRange(f"ratio must be in [0, 1], got {self.ratio}")
        if not self.low <= self.high:
            raise ConfigInvalid(
                f"low ({self.low}) must be <= high ({self.high})"
            )
        if self.seed < 0:
            raise ConfigInvalid(f"seed must be >= 0, got {self.seed}")


def _corruption_count(ratio: float, total: int) -> int:
    # floor, with a nudge so that an exact product is not lost to float
    # rounding (0.3 * 3200000 must give 960000, not 959999).
    return int(math.floor(ratio * total + 1e-6))


def add_sparse_noise(x: Tensor3, spec: NoiseSpec) -> Tensor3:
    """Corrupt floor(ratio * numel) distinct entries of a copy of x.

    Positions and replacement values come from two independent child
    streams of the seed, so the same seed always hits the same entries
    with the same values.
    """
    total = x.data.size
    count = _corruption_count(spec.ratio, total)
    out = x.data.copy(order="F")
    if count == 0:
        return Tensor3(out)
    pos_rng, val_rng = [
        np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(2)
    ]
    positions = pos_rng.choice(total, size=count, replace=False)
    values = val_rng.uniform(spec.low, spec.high, size=count)
    flat = out.ravel(order="F")
    flat[positions] = values
    return Tensor3(out)


def random_lowrank_sparse(
    dims: tuple[int, int, int],
    tubal_rank: int,
    sparsity: float,
    magnitude: float = 1.0,
    seed: int = 0,
) -> tuple[Tensor3, Tensor3, Tensor3]:
    """Planted recovery problem: returns (low_rank, sparse, their sum).

    The low-rank part is a t-product of two Gaussian factor tensors with
    entries scaled by 1/sqrt(rank * I3), which makes its tubal rank
    exactly `tubal_rank`. The sparse part puts +-magnitude at
    floor(sparsity * numel) uniformly chosen entries.
    """
    i1, i2, i3 = dims
    if min(i1, i2, i3) < 1:
        raise InvalidDims(f"dimensions must be >= 1, got {dims}")
    if not 1 <= tubal_rank <= min(i1, i2):
        raise InvalidRank(
            f"tubal rank must be in 1..{min(i1, i2)}, got {tubal_rank}"
        )
    if not 0.0 <= sparsity <= 1.0:
        raise RatioOutOfRange(f"sparsity must be in [0, 1], got {sparsity}")
    streams = np.random.SeedSequence(seed).spawn(4)
    scale = 1.0 / math.sqrt(tubal_rank * i3)
    p = np.random.default_rng(streams[0]).standard_normal((i1, tubal_rank, i3))
    q = np.random.default_rng(streams[1]).standard_normal((tubal_rank, i2, i3))
    low = tproduct(Tensor3(p * scale), Tensor3(q * scale))

    total = i1 * i2 * i3
    count = _corruption_count(sparsity, total)
    sparse = np.zeros(dims, order="F")
    if count > 0:
        positions = np.random.default_rng(streams[2]).choice(
            total, size=count, replace=False
        )
        signs = np.random.default_rng(streams[3]).integers(0, 2, size=count)
        sparse.ravel(order="F")[positions] = (2.0 * signs - 1.0) * magnitude
    sparse_t = Tensor3(sparse)
    return low, sparse_t, Tensor3(low.data + sparse)


def synth_video(
    width: int, height: int, frames: int, seed: int = 0
) -> tuple[Tensor3, np.ndarray]:
    """Static gradient background plus a brighter square bouncing around.

    Returns the clip as a (height, width, frames) tensor and the clean
    background frame. The square adds a flat +100 and the background stays
    at or below 130, so every frame differs from the background exactly on
    the square's pixels.
    """
    if min(width, height, frames) < 1:
        raise InvalidDims(
            f"width, height, frames must be >= 1, got {(width, height, frames)}"
        )
    side = max(1, width // 8)
    if side > height or side > width:
        raise InvalidDims(
            f"square of side {side} does not fit a {height}x{width} frame"
        )
    rows = np.arange(height)[:, None]
    cols = np.arange(width)[None, :]
    span = max(height + width - 2, 1)
    background = 30.0 + 100.0 * (rows + cols) / span

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    max_r = height - side
    max_c = width - side
    r = int(rng.integers(0, max_r + 1))
    c = int(rng.integers(0, max_c + 1))
    dr = int(rng.integers(0, 2)) * 2 - 1
    dc = int(rng.integers(0, 2)) * 2 - 1

    def advance(pos: int, step: int, hi: int) -> tuple[int, int]:
        if hi == 0:
            return 0, step
        pos += step
        if pos < 0:
            return 1, 1
        if pos > hi:
            return hi - 1, -1
        return pos, step

    video = np.empty((height, width, frames), order="F")
    for k in range(frames):
        frame = background.copy()
        frame[r : r + side, c : c + side] += 100.0
        video[:, :, k] = frame
        r, dr = advance(r, dr, max_r)
        c, dc = advance(c, dc, max_c)
    return Tensor3(video), background
