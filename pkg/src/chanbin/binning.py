"""Phase 1: recursive rho-binning of one channel.

rho is the mean gap between consecutive sorted pixel values, which
telescopes to ``(hi - lo) / (m - 1)``. Bins of width rho are laid from the
smallest value upward; whenever empty bins appear, each run of non-empty
bins is binned again on its own, until a working set bins without gaps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _accel
from .channels import LEVELS, ChannelHistogram, sorted_values
from .errors import EmptyWorkingSet, NonPositiveRho, RecursionLimitExceeded
from .kernels import DEPTH_EXCEEDED, binning_kernel
from .model import ColorBin

RHO_MODES = ("distinct", "all_pixels")


@dataclass(frozen=True)
class BinningConfig:
    rho_mode: str = "distinct"
    max_recursion_depth: int = 300

    def __post_init__(self):
        if self.rho_mode not in RHO_MODES:
            raise ValueError(f"rho_mode must be one of {RHO_MODES}, got {self.rho_mode!r}")
        if self.max_recursion_depth < LEVELS:
            raise ValueError("max_recursion_depth must be at least 256")


@dataclass(frozen=True, eq=False)
class WorkingSet:
    """Sub-multiset of a channel covering the value interval [lo, hi]."""

    hist: ChannelHistogram
    lo: int
    hi: int

    @classmethod
    def from_histogram(cls, hist: ChannelHistogram) -> "WorkingSet":
        occ = hist.occupied()
        if occ.size == 0:
            raise EmptyWorkingSet("histogram has no pixels")
        return cls(hist, int(occ[0]), int(occ[-1]))

    def restrict(self, lo: int, hi: int) -> "WorkingSet":
        counts = np.zeros(LEVELS, dtype=np.int64)
        counts[lo:hi + 1] = self.hist.counts[lo:hi + 1]
        return WorkingSet.from_histogram(ChannelHistogram(counts))

    @property
    def distinct(self) -> int:
        return int(np.count_nonzero(self.hist.counts))

    @property
    def total(self) -> int:
        return self.hist.total


def compute_rho(ws: WorkingSet, mode: str = "distinct") -> Fraction:
    """Mean consecutive difference of the sorted values, as an exact fraction."""
    if ws.total == 0:
        raise EmptyWorkingSet("cannot compute rho of an empty working set")
    m = ws.distinct if mode == "distinct" else ws.total
    if mode not in RHO_MODES:
        raise ValueError(f"unknown rho mode {mode!r}")
    if m == 1:
        return Fraction(0)
    return Fraction(ws.hi - ws.lo, m - 1)


def assign_bins(ws: WorkingSet, rho) -> list[ColorBin]:
    """Lay bins ``[lo + i*rho, lo + (i+1)*rho)`` over the working set, empty ones included."""
    rho = Fraction(rho)
    if rho <= 0:
        raise NonPositiveRho(f"rho must be positive, got {rho}")
    occ = ws.hist.occupied()
    num_bins = int((ws.hi - ws.lo) // rho) + 1
    idx = np.array([int((int(v) - ws.lo) // rho) for v in occ], dtype=np.int64)
    weights = ws.hist.counts[occ]
    cnt = np.bincount(idx, weights=weights, minlength=num_bins).astype(np.int64)
    vsum = np.bincount(idx, weights=weights * occ, minlength=num_bins).astype(np.int64)
    vmin = np.full(num_bins, -1, dtype=np.int64)
    vmax = np.full(num_bins, -1, dtype=np.int64)
    # occ is ascending, so the last write wins for max and the first for min
    vmax[idx] = occ
    vmin[idx[::-1]] = occ[::-1]
    bins = []
    for i in range(num_bins):
        lo = ws.lo + i * rho
        bins.append(ColorBin(float(lo), float(lo + rho), int(cnt[i]), int(vsum[i]), int(vmin[i]), int(vmax[i])))
    return bins


def segment_runs(bins: list[ColorBin], ws: WorkingSet) -> list[WorkingSet]:
    """Split the working set at empty bins, one working set per run of occupied bins."""
    runs: list[WorkingSet] = []
    start = None
    for i, b in enumerate(bins + [None]):
        if b is not None and b.count > 0:
            if start is None:
                start = i
        elif start is not None:
            runs.append((bins[start].min_value, bins[i - 1].max_value))
            start = None
    if len(runs) == 1:
        return [ws]
    return [ws.restrict(lo, hi) for lo, hi in runs]


class BinningRun(NamedTuple):
    bins: list[ColorBin]
    max_depth: int
    rho_stops: int


def _final_bin(ws: WorkingSet, rho_stop: bool) -> ColorBin:
    occ = ws.hist.occupied()
    counts = ws.hist.counts[occ]
    hi = ws.hi + 1 if rho_stop else ws.hi
    return ColorBin(float(ws.lo), float(hi), int(counts.sum()), int((counts * occ).sum()), ws.lo, ws.hi)


def _binning_numpy(hist: ChannelHistogram, config: BinningConfig) -> BinningRun:
    out: list[ColorBin] = []
    deepest = 0
    rho_stops = 0
    stack = [(WorkingSet.from_histogram(hist), 1)]
    while stack:
        ws, depth = stack.pop()
        if depth > config.max_recursion_depth:
            raise RecursionLimitExceeded(f"binning exceeded depth {config.max_recursion_depth}")
        deepest = max(deepest, depth)
        if ws.distinct == 1:
            out.append(_final_bin(ws, False))
            continue
        rho = compute_rho(ws, config.rho_mode)
        if rho < 1:
            rho_stops += 1
            out.append(_final_bin(ws, True))
            continue
        bins = assign_bins(ws, rho)
        if all(b.count > 0 for b in bins):
            out.extend(bins)
            continue
        stack.extend((run, depth + 1) for run in reversed(segment_runs(bins, ws)))
    return BinningRun(out, deepest, rho_stops)


def _binning_compiled(hist: ChannelHistogram, config: BinningConfig, kernel=None) -> BinningRun:
    kernel = kernel or binning_kernel
    if hist.total == 0:
        raise EmptyWorkingSet("histogram has no pixels")
    rlo, rhi, cnt, vsum, vmin, vmax, n, deepest, stops = kernel(
        np.ascontiguousarray(hist.counts, dtype=np.int64),
        config.rho_mode == "distinct",
        config.max_recursion_depth,
    )
    if deepest == DEPTH_EXCEEDED:
        raise RecursionLimitExceeded(f"binning exceeded depth {config.max_recursion_depth}")
    bins = [
        ColorBin(float(rlo[i]), float(rhi[i]), int(cnt[i]), int(vsum[i]), int(vmin[i]), int(vmax[i]))
        for i in range(n)
    ]
    return BinningRun(bins, int(deepest), int(stops))


def run_binning(hist: ChannelHistogram, config: BinningConfig | None = None, backend: str | None = None) -> BinningRun:
    """Binning plus recursion statistics.

    ``backend`` is ``"numba"`` (the compiled kernel, or its Python body when
    numba is disabled) or ``"numpy"``; by default the compiled kernel is used
    when numba is enabled.
    """
    config = config or BinningConfig()
    if backend is None:
        backend = "numba" if _accel.ENABLE_NUMBA else "numpy"
    if backend == "numpy":
        return _binning_numpy(hist, config)
    if backend == "numba":
        return _binning_compiled(hist, config)
    if backend == "python":
        return _binning_compiled(hist, config, _accel.python_impl(binning_kernel))
    raise ValueError(f"unknown backend {backend!r}")


def channelized_binning(hist: ChannelHistogram, config: BinningConfig | None = None) -> list[ColorBin]:
    return run_binning(hist, config).bins


def literal_rho(hist: ChannelHistogram, mode: str = "distinct") -> float:
    """rho by direct summation of consecutive differences (no telescoping)."""
    vals = sorted_values(hist, mode)
    if vals.size == 1:
        return 0.0
    return float(np.diff(vals).sum()) / (vals.size - 1)
