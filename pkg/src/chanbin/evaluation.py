"""Euclidean error between estimated and actual dominant values.

Each (value, percent) pair is a point; a channel's error is the mean
distance over matched pairs, and an image's error the mean over channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import ChannelMismatch, EmptyInput, MissingChannel, TooManyColors
from .model import ChannelId, DominantColor
from .pipeline import ChannelReport

MAX_COLORS = 16
_TIE = 1e-12


def pair_distance(est: DominantColor, act: DominantColor) -> float:
    return math.hypot(est.value - act.value, est.percent - act.percent)


def match_pairs(estimated: Sequence[DominantColor], actual: Sequence[DominantColor]) -> list[tuple[int, int]]:
    """Minimum-cost one-to-one matching of the shorter list into the longer.

    Exact search over assignments (bitmask dynamic programming). Among
    optimal matchings the lexicographically smallest pair list wins.
    Returns ``(index_estimated, index_actual)`` pairs.
    """
    if not estimated or not actual:
        raise EmptyInput("both color lists must be non-empty")
    if len(estimated) > MAX_COLORS or len(actual) > MAX_COLORS:
        raise TooManyColors(f"at most {MAX_COLORS} colors per list")
    flip = len(estimated) > len(actual)
    small, large = (actual, estimated) if flip else (estimated, actual)
    cost = [[pair_distance(s, l) if not flip else pair_distance(l, s) for l in large] for s in small]
    n_small, n_large = len(small), len(large)

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> float:
        if i == n_small:
            return 0.0
        return min(cost[i][j] + best(i + 1, used | (1 << j)) for j in range(n_large) if not used >> j & 1)

    pairs = []
    used = 0
    for i in range(n_small):
        target = best(i, used)
        for j in range(n_large):
            if used >> j & 1:
                continue
            if cost[i][j] + best(i + 1, used | (1 << j)) <= target + _TIE * max(1.0, target):
                pairs.append((j, i) if flip else (i, j))
                used |= 1 << j
                break
    return sorted(pairs)


@dataclass(frozen=True)
class ChannelError:
    epsilon: float
    matched_pairs: tuple[tuple[int, int], ...]
    unmatched_estimated: int
    unmatched_actual: int


@dataclass(frozen=True)
class ErrorReport:
    per_channel: dict
    image_epsilon: float

    def to_dict(self) -> dict:
        return {
            "per_channel": {
                ch.label: {
                    "epsilon": err.epsilon,
                    "matched_pairs": [list(p) for p in err.matched_pairs],
                    "unmatched_estimated": err.unmatched_estimated,
                    "unmatched_actual": err.unmatched_actual,
                }
                for ch, err in self.per_channel.items()
            },
            "image_epsilon": self.image_epsilon,
        }


def channel_error(estimated: ChannelReport, actual: ChannelReport) -> ChannelError:
    if estimated.channel != actual.channel:
        raise ChannelMismatch(f"{estimated.channel.label} vs {actual.channel.label}")
    pairs = match_pairs(estimated.colors, actual.colors)
    total = math.fsum(pair_distance(estimated.colors[i], actual.colors[j]) for i, j in pairs)
    return ChannelError(
        total / len(pairs),
        tuple(pairs),
        len(estimated.colors) - len(pairs),
        len(actual.colors) - len(pairs),
    )


def epsilon(estimated: ChannelReport, actual: ChannelReport) -> float:
    return channel_error(estimated, actual).epsilon


def image_epsilon(estimated: Sequence[ChannelReport], actual: Sequence[ChannelReport]) -> ErrorReport:
    est = {r.channel: r for r in estimated}
    act = {r.channel: r for r in actual}
    missing = [ch.label for ch in ChannelId if ch not in est or ch not in act]
    if missing:
        raise MissingChannel(f"missing channels: {', '.join(missing)}")
    per = {ch: channel_error(est[ch], act[ch]) for ch in ChannelId}
    return ErrorReport(per, math.fsum(e.epsilon for e in per.values()) / 3)
