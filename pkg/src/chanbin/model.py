"""Value types shared across modules."""
from __future__ import annotations

import enum
from dataclasses import dataclass


class ChannelId(enum.IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, name: str) -> "ChannelId":
        return cls[name.upper()]


@dataclass(frozen=True)
class ColorBin:
    """A half-open value range plus the pixels that fell into it.

    ``min_value``/``max_value`` are the smallest and largest member values;
    the centroid is kept as the exact pair ``value_sum / count``.
    """

    range_lo: float
    range_hi: float
    count: int
    value_sum: int
    min_value: int
    max_value: int

    @property
    def centroid(self) -> float:
        return self.value_sum / self.count


@dataclass(frozen=True)
class DominantColor:
    value: float
    percent: float

    @property
    def pixel_value(self) -> int:
        """Value rounded half-up, as serialized."""
        return int(self.value + 0.5)
