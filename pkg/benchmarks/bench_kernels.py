#!/usr/bin/env python3
"""Timing comparison of the compiled and numpy selection kernels.

Usage: python benchmarks/bench_kernels.py [--trials N]
"""

import argparse
import time

import numpy as np

from fasisac import _gains_py
from fasisac.channel import FasGeometry, build_jakes_correlation

try:
    from fasisac import _gains_cy
except ImportError:
    _gains_cy = None

CASES = [
    ("L=256 W=0.5", 256, 0.5),
    ("L=256 W=2.0", 256, 2.0),
    ("L=256 W=8.0", 256, 8.0),
    ("L=64  W=2.0", 64, 2.0),
]
BLOCK = 4096


def bench(impl, F, wc, ws, alphas, blocks):
    start = time.perf_counter()
    for _ in range(blocks):
        impl.selected_gains(F, wc, ws, alphas)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=200_000)
    args = parser.parse_args()
    blocks = max(args.trials // BLOCK, 1)
    alphas = np.array([1.0])
    rng = np.random.default_rng(0)

    print(f"{'case':<12} {'trials':>8} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, num_ports, w in CASES:
        F = np.ascontiguousarray(
            build_jakes_correlation(FasGeometry(num_ports, w)).root,
            dtype=np.complex128,
        )
        r = F.shape[1]
        wc = (rng.standard_normal((r, BLOCK)) + 1j * rng.standard_normal((r, BLOCK))) * np.sqrt(0.5)
        ws = (rng.standard_normal((r, BLOCK)) + 1j * rng.standard_normal((r, BLOCK))) * np.sqrt(0.5)

        t_py = bench(_gains_py, F, wc, ws, alphas, blocks)
        if _gains_cy is not None:
            t_cy = bench(_gains_cy, F, wc, ws, alphas, blocks)
            print(
                f"{name:<12} {blocks * BLOCK:>8} {t_py:>9.2f}s {t_cy:>9.2f}s "
                f"{t_py / t_cy:>7.2f}x"
            )
        else:
            print(f"{name:<12} {blocks * BLOCK:>8} {t_py:>9.2f}s {'n/a':>10} {'n/a':>8}")


if __name__ == "__main__":
    main()
