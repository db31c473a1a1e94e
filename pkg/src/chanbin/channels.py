"""Per-channel value histograms."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRange
from .image_io import RgbImage

LEVELS = 256


@dataclass(frozen=True, eq=False)
class ChannelHistogram:
    """Pixel-value multiset of one 8-bit channel as 256 counts."""

    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (LEVELS,):
            raise ValueError(f"histogram needs {LEVELS} buckets, got shape {counts.shape}")
        if (counts < 0).any():
            raise ValueError("histogram counts must be non-negative")
        counts = counts.copy()
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def occupied(self) -> np.ndarray:
        return np.flatnonzero(self.counts)

    def __eq__(self, other):
        if not isinstance(other, ChannelHistogram):
            return NotImplemented
        return bool(np.array_equal(self.counts, other.counts))

    def __hash__(self):
        return hash(self.counts.tobytes())


def histogram_from_values(values) -> ChannelHistogram:
    arr = np.asarray(values, dtype=np.int64).ravel()
    if arr.size == 0:
        raise OutOfRange("histogram needs at least one value")
    if arr.min() < 0 or arr.max() >= LEVELS:
        raise OutOfRange(f"values must lie in [0, {LEVELS - 1}]")
    return ChannelHistogram(np.bincount(arr, minlength=LEVELS))


def channel_histogram(image: RgbImage, channel: int) -> ChannelHistogram:
    plane = image.data[:, :, channel].ravel()
    return ChannelHistogram(np.bincount(plane, minlength=LEVELS))


def split_channels(image: RgbImage) -> tuple[ChannelHistogram, ChannelHistogram, ChannelHistogram]:
    return tuple(channel_histogram(image, ch) for ch in range(3))


def sorted_values(hist: ChannelHistogram, mode: str = "all_pixels") -> np.ndarray:
    """Ascending pixel values: each occupied value once (``distinct``) or with multiplicity."""
    if mode == "distinct":
        return hist.occupied()
    if mode == "all_pixels":
        return np.repeat(np.arange(LEVELS), hist.counts)
    raise ValueError(f"unknown mode {mode!r}")
