#!/usr/bin/env python3
"""Compiled kernels against their pure-Python/numpy fallbacks.

Two views:

* kernel level, in one process: each ``@jit`` kernel versus its ``py_func``,
  plus the Fraction-based numpy binning backend;
* end to end: ``extract_dominant_colors`` in a child process with and
  without ``CHANBIN_DISABLE_NUMBA=1``.

    python benchmarks/bench_kernels.py [--repeat N] [--width W --height H]
"""
import argparse
import json
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from chanbin._accel import ENABLE_NUMBA, python_impl
from chanbin.binning import BinningConfig, run_binning
from chanbin.channels import split_channels
from chanbin.image_io import CompositionSpec, generate_stripes
from chanbin.kernels import binning_kernel, hump_labels, lloyd_kernel, merge_kernel


def workload_image(width, height, sigma=5.0):
    colors = [(0, 162, 232), (34, 177, 76), (153, 217, 234), (163, 73, 164), (255, 201, 14)]
    spec = CompositionSpec.from_percentages(colors, [25, 20, 7, 28, 20], sigma, seed=11)
    return generate_stripes(spec, width, height)


def timeit(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def kernel_rows(hist, repeat):
    counts = hist.counts
    run = run_binning(hist)
    arrays = [np.array([getattr(b, f) for b in run.bins], dtype=np.float64 if f.startswith("range") else np.int64)
              for f in ("range_lo", "range_hi", "count", "value_sum", "min_value", "max_value")]
    limit = 0.05 * hist.total
    occ = hist.occupied()
    values = occ.astype(np.float64)
    weights = counts[occ].astype(np.float64)
    init = np.linspace(values[0], values[-1], 6)[1:-1].copy()

    cases = {
        "binning": (binning_kernel, lambda k: k(counts, True, 300)),
        "merge": (merge_kernel, lambda k: k(*[a.copy() for a in arrays], limit, 40.0)),
        "humps": (hump_labels, lambda k: k(arrays[2], arrays[4], arrays[5], 0.5)),
        "lloyd": (lloyd_kernel, lambda k: k(values, weights, init.copy(), 100, 1e-6)),
    }
    rows = []
    for name, (kernel, call) in cases.items():
        fast = timeit(lambda: call(kernel), repeat)
        slow = timeit(lambda: call(python_impl(kernel)), max(1, repeat // 5))
        rows.append((name, fast, slow))
    numpy_backend = timeit(lambda: run_binning(hist, BinningConfig(), backend="numpy"), max(1, repeat // 5))
    rows.append(("binning (numpy backend)", rows[0][1], numpy_backend))
    return rows


CHILD = """
import json, statistics, sys, time
from chanbin._accel import ENABLE_NUMBA
from chanbin.pipeline import extract_dominant_colors
sys.path.insert(0, {here!r})
from bench_kernels import workload_image
img = workload_image({width}, {height})
extract_dominant_colors(img)
times = []
for _ in range({repeat}):
    t0 = time.perf_counter()
    extract_dominant_colors(img)
    times.append(time.perf_counter() - t0)
print(json.dumps({{"numba": ENABLE_NUMBA, "median": statistics.median(times)}}))
"""


def end_to_end(width, height, repeat, disable):
    env = dict(os.environ)
    env.pop("CHANBIN_DISABLE_NUMBA", None)
    if disable:
        env["CHANBIN_DISABLE_NUMBA"] = "1"
    code = CHILD.format(here=os.path.dirname(os.path.abspath(__file__)), width=width, height=height, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=25)
    parser.add_argument("--width", type=int, default=256)
    parser.add_argument("--height", type=int, default=384)
    args = parser.parse_args(argv)

    if not ENABLE_NUMBA:
        print("numba disabled in this process; kernel rows compare python against python", file=sys.stderr)
    img = workload_image(args.width, args.height)
    hist = split_channels(img)[2]

    print(f"kernel timings, blue channel of a {args.width}x{args.height} image (median ms)")
    print(f"{'kernel':<26}{'numba':>10}{'fallback':>12}{'speedup':>10}")
    for name, fast, slow in kernel_rows(hist, args.repeat):
        print(f"{name:<26}{fast * 1e3:>10.3f}{slow * 1e3:>12.3f}{slow / fast:>9.1f}x")

    print()
    print("extract_dominant_colors, fresh process (median ms)")
    on = end_to_end(args.width, args.height, args.repeat, disable=False)
    off = end_to_end(args.width, args.height, max(1, args.repeat // 5), disable=True)
    print(f"  numba on : {on['median'] * 1e3:8.3f}")
    print(f"  numba off: {off['median'] * 1e3:8.3f}  ({off['median'] / on['median']:.1f}x slower)")


if __name__ == "__main__":
    main()
