"""Lloyd (GLA) quantizer on a channel histogram, used as the comparison baseline."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .binning import BinningConfig
from .channels import ChannelHistogram
from .errors import KTooLarge
from .kernels import lloyd_kernel
from .merge import MergeConfig
from .model import ChannelId, DominantColor

INITS = ("uniform_spread", "seeded_random")


@dataclass(frozen=True)
class GlaConfig:
    k: int = 4
    max_iters: int = 100
    tol: float = 1e-6
    init: str = "uniform_spread"
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= 256:
            raise ValueError("k must lie in [1, 256]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.init not in INITS:
            raise ValueError(f"init must be one of {INITS}")


class LloydResult(NamedTuple):
    colors: list[DominantColor]
    objective: np.ndarray
    iterations: int


def initial_centroids(hist: ChannelHistogram, config: GlaConfig) -> np.ndarray:
    occ = hist.occupied()
    lo, hi = float(occ[0]), float(occ[-1])
    if config.init == "uniform_spread":
        return lo + (np.arange(config.k) + 0.5) * (hi - lo) / config.k
    rng = np.random.default_rng(config.seed)
    return rng.choice(occ, size=config.k, replace=False).astype(np.float64)


def lloyd_run(hist: ChannelHistogram, config: GlaConfig) -> LloydResult:
    occ = hist.occupied()
    if config.k > occ.size:
        raise KTooLarge(f"k={config.k} exceeds the {occ.size} distinct values present")
    values = occ.astype(np.float64)
    weights = hist.counts[occ].astype(np.float64)
    cent, mass, objective, n_iter = lloyd_kernel(
        values, weights, initial_centroids(hist, config), config.max_iters, config.tol
    )
    total = weights.sum()
    order = np.argsort(cent, kind="mergesort")
    colors = [DominantColor(float(cent[i]), 100.0 * float(mass[i]) / total) for i in order if mass[i] > 0]
    return LloydResult(colors, np.asarray(objective), int(n_iter))


def lloyd_quantize(hist: ChannelHistogram, config: GlaConfig) -> list[DominantColor]:
    return lloyd_run(hist, config).colors


@dataclass
class ComparisonRecord:
    channel: ChannelId | None
    binning: list[DominantColor]
    gla: list[DominantColor]
    binning_k: int
    wall_times: dict = field(default_factory=dict)


def compare_methods(
    hist: ChannelHistogram,
    binning_cfg: BinningConfig | None = None,
    merge_cfg: MergeConfig | None = None,
    gla_cfg: GlaConfig | None = None,
    channel: ChannelId | None = None,
) -> ComparisonRecord:
    """Run channelized binning and Lloyd on the same histogram.

    Binning finds its own number of values; Lloyd is told ``gla_cfg.k``.
    """
    from .pipeline import ExtractionConfig, extract_channel

    config = ExtractionConfig(binning_cfg or BinningConfig(), merge_cfg or MergeConfig())
    gla_cfg = gla_cfg or GlaConfig()
    t0 = time.perf_counter()
    binned = extract_channel(hist, config)
    t1 = time.perf_counter()
    gla = lloyd_quantize(hist, gla_cfg)
    t2 = time.perf_counter()
    return ComparisonRecord(channel, binned, gla, len(binned), {"binning_s": t1 - t0, "gla_s": t2 - t1})
