"""Time the numba and numpy kernel backends on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sites 16]
"""

import argparse
import time

import numpy as np

from yldqpt import _kernels


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(sites):
    rng = np.random.default_rng(0)
    mu = rng.normal(size=256) + 1j * rng.normal(size=256)
    times = np.linspace(0.0, 60.0, 2000)
    side = max(2, int(np.sqrt(sites)))
    return [
        (f"spin_diagonals n={sites}", lambda k: k.spin_diagonals(sites)),
        (f"partition_1d_brute n={sites}", lambda k: k.partition_1d_brute(0.3, 1.0, 0.7, sites)),
        (f"partition_2d_brute {side}x{side}", lambda k: k.partition_2d_brute(0.3, 1.0, 0.5, 0.7, side, side)),
        ("trace_exp_grid 256x2000", lambda k: k.trace_exp_grid(mu, times, 0.0)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sites", type=int, default=16)
    args = parser.parse_args()
    backends = [_kernels.NUMPY_KERNELS]
    if _kernels.NUMBA_KERNELS is not None:
        backends.append(_kernels.NUMBA_KERNELS)
    print(f"{'kernel':34s}" + "".join(f"{k.name:>12s}" for k in backends) + f"{'speedup':>10s}")
    for name, call in cases(args.sites):
        t = [best_of(lambda k=k: call(k), args.repeat) for k in backends]
        speedup = f"{t[0] / t[1]:9.1f}x" if len(t) == 2 else ""
        print(f"{name:34s}" + "".join(f"{x * 1e3:10.2f}ms" for x in t) + speedup)


if __name__ == "__main__":
    main()
