"""Compare the numba and pure-numpy kernel routes.

Run with ``python benchmarks/bench_kernels.py``.  The first numba call
includes compilation (or cache load); it is reported separately and
excluded from the steady-state timings.
"""

import argparse
import time

import numpy as np

from cominimal import kernels


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def cases(scale: int):
    rng = np.random.default_rng(0)
    xs = np.arange(-scale, 0, dtype=np.int64)
    shifts = np.array(sorted({0} | {s * 4**k for k in range(12) for s in (1, -1)}), dtype=np.int64)
    members = np.unique(rng.integers(-4 * scale, 4 * scale, size=scale // 4)).astype(np.int64)
    yield "shifted_membership", (xs, shifts, members)

    a_vals = np.unique(rng.integers(-scale, scale, size=scale // 2)).astype(np.int64)
    b_vals = np.array(sorted({0} | {s * 4**k for k in range(10) for s in (1, -1)}), dtype=np.int64)
    yield "representation_counts", (a_vals, b_vals, -scale, scale)

    n = 16
    shifted = np.array([int(rng.integers(1, 1 << n)) for _ in range(n)], dtype=np.int64)
    yield "sumset_table", (shifted,)
    sums = kernels.sumset_table_numpy(shifted)
    yield "minimal_flags", (sums == (1 << n) - 1, n)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scale", type=int, default=200_000)
    args = parser.parse_args(argv)
    print(f"numba available: {kernels.NUMBA_AVAILABLE}; dispatch backend: {kernels.BACKEND}")
    print(f"{'kernel':<24}{'first numba':>14}{'numba':>12}{'numpy':>12}{'speedup':>10}  agree")
    for name, args_ in cases(args.scale):
        nb = getattr(kernels, name + "_numba")
        npy = getattr(kernels, name + "_numpy")
        start = time.perf_counter()
        nb(*args_)
        first = time.perf_counter() - start
        t_nb, out_nb = _time(nb, *args_)
        t_np, out_np = _time(npy, *args_)
        agree = np.array_equal(out_nb, out_np)
        print(f"{name:<24}{first:>13.4f}s{t_nb:>11.4f}s{t_np:>11.4f}s{t_np / t_nb:>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
