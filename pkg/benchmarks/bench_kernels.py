"""Time each kernel under the numba and numpy back ends.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N wall time for each back end
and the speed-up. The first numba call is made before timing so compilation
(or loading from the on-disk cache) is not counted.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from extremal_ellipses import kernels
from extremal_ellipses.perimeter import PerimeterSeries

COEFFS = np.ascontiguousarray(PerimeterSeries(64).values)
N_GRID = np.linspace(0.0, 0.99, 100_000)
B_GRID = np.linspace(-6.0, 6.0, 200_000)

CASES = {
    "series_pair (1e5 points, order 64)": lambda be: be.series_pair(N_GRID, COEFFS),
    "riccati_rk4 (1e5 steps)": lambda be: be.riccati_rk4(0.1, 0.00125, 0.9, 100_000),
    "chord_area (1e5 strips)": lambda be: be.chord_area(2.0, 0.3, 1.0, 0.1, -0.2, -1.0, -0.9, 0.8, 100_000),
    "pencil_area (2e5 values)": lambda be: be.pencil_area(B_GRID, 4.0, 1.0, -6.0, 0.0, -4.0, 1e-12),
}


def best_time(fn, backend, repeat: int) -> float:
    fn(backend)
    return min(timeit.repeat(lambda: fn(backend), number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if kernels.NUMBA is None:
        print("numba is not importable; only the numpy back end can be timed")
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s}")
    for name, fn in CASES.items():
        t_np = best_time(fn, kernels.NUMPY, args.repeat)
        if kernels.NUMBA is None:
            print(f"{name:40s} {1e3 * t_np:12.3f} {'-':>12s} {'-':>9s}")
            continue
        t_nb = best_time(fn, kernels.NUMBA, args.repeat)
        print(f"{name:40s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
