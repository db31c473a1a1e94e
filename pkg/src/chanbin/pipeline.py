"""Image to per-channel dominant values."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .binning import BinningConfig, channelized_binning
from .channels import ChannelHistogram, split_channels
from .image_io import RgbImage
from .merge import MergeConfig, merge_phase
from .model import ChannelId, DominantColor


@dataclass(frozen=True)
class ExtractionConfig:
    binning: BinningConfig = field(default_factory=BinningConfig)
    merge: MergeConfig = field(default_factory=MergeConfig)


@dataclass(frozen=True)
class ChannelReport:
    channel: ChannelId
    colors: tuple[DominantColor, ...]

    @property
    def values(self) -> list[float]:
        return [c.value for c in self.colors]

    @property
    def percents(self) -> list[float]:
        return [c.percent for c in self.colors]


def extract_channel(hist: ChannelHistogram, config: ExtractionConfig | None = None) -> list[DominantColor]:
    config = config or ExtractionConfig()
    bins = channelized_binning(hist, config.binning)
    return merge_phase(bins, hist.total, config.merge)


def extract_dominant_colors(
    image: RgbImage, config: ExtractionConfig | None = None, workers: int = 1
) -> tuple[ChannelReport, ChannelReport, ChannelReport]:
    """Dominant values and percentages for the red, green and blue channels."""
    config = config or ExtractionConfig()
    hists = split_channels(image)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, 3)) as pool:
            results = list(pool.map(lambda h: extract_channel(h, config), hists))
    else:
        results = [extract_channel(h, config) for h in hists]
    return tuple(ChannelReport(ch, tuple(colors)) for ch, colors in zip(ChannelId, results))
