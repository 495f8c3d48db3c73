"""Compare the numba and numpy backends of the two hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once to trigger compilation, then timed; the outputs
of the two backends are checked for exact equality.
"""
import argparse
import time

import numpy as np

from qteam import DecisionProblem, _accel, kernels
from qteam.search import correlation_form


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not _accel.HAVE_NUMBA:
        print("numba not installed; only the numpy backend is available")
        return

    coeffs, offset = correlation_form(DecisionProblem(0.8, 0.8, 1.0, 3.0))
    rng = np.random.default_rng(0)
    uniforms = rng.random((2_000_000, 2))
    p_second = np.array([0.75, 0.25])

    cases = []
    for g in (16, 32, 48):
        table = kernels.cos_difference_table(g)
        cases.append(
            (
                f"grid_costs G={g} ({g**4:,} points)",
                lambda t=table: kernels.grid_costs_numpy(coeffs, offset, t),
                lambda t=table: kernels.grid_costs_jit(coeffs, offset, t),
            )
        )
    cases.append(
        (
            f"sample_counts ({len(uniforms):,} shots)",
            lambda: kernels.sample_counts_numpy(0.5, p_second, uniforms),
            lambda: kernels.sample_counts_jit(0.5, p_second, uniforms),
        )
    )

    print(f"{'kernel':<36}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}  identical")
    for name, np_fn, jit_fn in cases:
        same = np.array_equal(np_fn(), jit_fn())
        t_np, t_jit = best_of(np_fn, args.repeat), best_of(jit_fn, args.repeat)
        print(f"{name:<36}{t_np * 1e3:>10.2f}{t_jit * 1e3:>10.2f}{t_np / t_jit:>8.1f}x  {same}")


if __name__ == "__main__":
    main()
