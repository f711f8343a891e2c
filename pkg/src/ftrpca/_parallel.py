"""Optional thread pool for per-slice loops.

FTRPCA_THREADS controls the worker count. Unset or 0 means "auto", which
resolves to serial execution here: the per-slice work is BLAS-bound and BLAS
already keeps the cores busy, so stacking a Python pool on top by default
only adds contention. Set FTRPCA_THREADS=N (N >= 2) to opt in anyway, e.g.
when the slices are small and BLAS runs single-threaded.

Workers write results into preallocated arrays at disjoint slice indices and
every reduction happens afterwards in index order, so the output is bitwise
identical for any worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigInvalid


def worker_count() -> int:
    """Resolve FTRPCA_THREADS to an effective worker count (>= 1)."""
    raw = os.environ.get("FTRPCA_THREADS", "").strip()
    if raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigInvalid(f"FTRPCA_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ConfigInvalid(f"FTRPCA_THREADS must be >= 0, got {n}")
    return 1 if n == 0 else n


def map_slices(fn, count: int) -> None:
    """Run fn(i) for i in range(count), possibly on a thread pool.

    fn must only write to slots owned by its index; return values are
    discarded.
    """
    workers = worker_count()
    if workers <= 1 or count <= 1:
        for i in range(count):
            fn(i)
        return
    with ThreadPoolExecutor(max_workers=min(workers, count)) as pool:
        # list() forces completion and re-raises worker exceptions.
        list(pool.map(fn, range(count)))
