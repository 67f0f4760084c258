"""Shared helpers: seed splitting, slopes, work chunking."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt


def derive_subseed(seed: int, index: int) -> int:
    """Child seed ``index`` of ``seed``.

    The rule only depends on (seed, index), so batch results do not
    depend on how the work is split across workers.
    """
    child = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(child.generate_state(1, dtype=np.uint64)[0])


def log_log_slope(x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def standard_error(values: npt.ArrayLike) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return 0.0
    return float(np.std(arr, ddof=1) / np.sqrt(arr.size))


def chunk_indices(count: int, n_chunks: int) -> list[range]:
    """Split range(count) into at most ``n_chunks`` contiguous ranges."""
    n_chunks = max(1, min(n_chunks, count))
    bounds = np.linspace(0, count, n_chunks + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def format_float(x: float) -> str:
    """Shortest round-trip text for a float."""
    return repr(float(x))


def flatten(chunks: Sequence[Sequence]) -> list:
    return [item for chunk in chunks for item in chunk]
