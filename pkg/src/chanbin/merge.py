"""Phase 2: fold small, nearby bins into their neighbors and report percentages."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyInput
from .kernels import cap_kernel, hump_labels, merge_kernel
from .model import ColorBin, DominantColor


@dataclass(frozen=True)
class MergeConfig:
    """Merge thresholds.

    ``thresh_count_pct`` is a percentage of the channel's pixels.
    ``valley_ratio`` controls hump consolidation of touching bins (see
    :func:`consolidate_humps`); ``None`` turns that step off.
    """

    thresh_count_pct: float = 5.0
    thresh_distance: float = 40.0
    max_colors: Optional[int] = 8
    valley_ratio: Optional[float] = 0.5

    def __post_init__(self):
        if not (0.0 <= self.thresh_count_pct <= 100.0):
            raise ValueError("thresh_count_pct must lie in [0, 100]")
        if not (math.isfinite(self.thresh_distance) and self.thresh_distance >= 0.0):
            raise ValueError("thresh_distance must be finite and >= 0")
        if self.max_colors is not None and self.max_colors < 1:
            raise ValueError("max_colors must be positive")
        if self.valley_ratio is not None and not (math.isfinite(self.valley_ratio) and self.valley_ratio >= 0.0):
            raise ValueError("valley_ratio must be finite and >= 0")


def _to_arrays(bins):
    return (
        np.array([b.range_lo for b in bins], dtype=np.float64),
        np.array([b.range_hi for b in bins], dtype=np.float64),
        np.array([b.count for b in bins], dtype=np.int64),
        np.array([b.value_sum for b in bins], dtype=np.int64),
        np.array([b.min_value for b in bins], dtype=np.int64),
        np.array([b.max_value for b in bins], dtype=np.int64),
    )


def _from_arrays(arrays, k):
    rlo, rhi, cnt, vsum, vmin, vmax = arrays
    return [
        ColorBin(float(rlo[i]), float(rhi[i]), int(cnt[i]), int(vsum[i]), int(vmin[i]), int(vmax[i]))
        for i in range(k)
    ]


def _check(bins):
    if not bins:
        raise EmptyInput("no bins to merge")
    if any(b.count <= 0 for b in bins):
        raise ValueError("merge input must contain only non-empty bins")


def consolidate_humps(bins: list[ColorBin], valley_ratio: float = 0.5) -> list[ColorBin]:
    """Fuse touching bins that belong to the same density hump.

    Bins whose member values are adjacent integers form chains; a chain is
    split only at valleys whose density falls below ``valley_ratio`` times
    the lower of the two neighboring peaks. Isolated bins are left alone.
    """
    _check(bins)
    arrays = _to_arrays(bins)
    labels = hump_labels(arrays[2], arrays[4], arrays[5], float(valley_ratio))
    out = []
    for lab in range(int(labels[-1]) + 1):
        idx = np.flatnonzero(labels == lab)
        first, last = bins[idx[0]], bins[idx[-1]]
        out.append(
            ColorBin(
                first.range_lo,
                last.range_hi,
                sum(bins[i].count for i in idx),
                sum(bins[i].value_sum for i in idx),
                first.min_value,
                last.max_value,
            )
        )
    return out


def merge_bins(bins: list[ColorBin], total: int, config: MergeConfig | None = None) -> list[ColorBin]:
    """Repeatedly fold the smallest under-populated bin into its nearest-centroid neighbor.

    A bin qualifies while its count is below ``thresh_count_pct`` percent of
    ``total`` and its nearest neighbor centroid lies closer than
    ``thresh_distance``.
    """
    config = config or MergeConfig()
    _check(bins)
    arrays = _to_arrays(bins)
    k = merge_kernel(*arrays, config.thresh_count_pct * total / 100.0, float(config.thresh_distance))
    return _from_arrays(arrays, k)


def cap_bins(bins: list[ColorBin], max_colors: int) -> list[ColorBin]:
    _check(bins)
    arrays = _to_arrays(bins)
    k = cap_kernel(*arrays, len(bins), int(max_colors))
    return _from_arrays(arrays, k)


def finalize_report(bins: list[ColorBin], total: int, config: MergeConfig | None = None) -> list[DominantColor]:
    config = config or MergeConfig()
    _check(bins)
    if config.max_colors is not None and len(bins) > config.max_colors:
        bins = cap_bins(bins, config.max_colors)
    return [DominantColor(b.value_sum / b.count, 100.0 * b.count / total) for b in bins]


def merge_phase(bins: list[ColorBin], total: int, config: MergeConfig | None = None) -> list[DominantColor]:
    """Hump consolidation (if enabled), threshold merge, then the report."""
    config = config or MergeConfig()
    if config.valley_ratio is not None:
        bins = consolidate_humps(bins, config.valley_ratio)
    return finalize_report(merge_bins(bins, total, config), total, config)
