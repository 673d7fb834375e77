"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each row
reports the best-of-N wall time per call for both backends and their ratio.
"""
import argparse
import timeit

import numpy as np

from maxentutil import _kernels_py as fallback
from maxentutil import kernels

CASES = {
    "trapezoid": lambda k, a: k.trapezoid(a["f"], 1e-3),
    "cumulative_trapezoid": lambda k, a: k.cumulative_trapezoid(a["f"], 1e-3),
    "neg_xlogx_trapezoid": lambda k, a: k.neg_xlogx_trapezoid(a["f"], 1e-3),
    "kl_trapezoid": lambda k, a: k.kl_trapezoid(a["f"], a["q"], 1e-3, 1e-12),
    "expfamily_stats": lambda k, a: k.expfamily_stats(a["phi"], a["logbase"], a["mu"]),
    "cumulative_trapezoid_2d": lambda k, a: k.cumulative_trapezoid_2d(a["f2"], 5e-3, 5e-3),
}


def inputs(n, rng):
    x = np.linspace(0.0, 1.0, n)
    return {
        "f": rng.uniform(0.1, 2.0, n),
        "q": rng.uniform(0.1, 2.0, n),
        "phi": np.ascontiguousarray(np.vstack([x, x * x])),
        "logbase": np.log(np.full(n, 1.0 / n)),
        "mu": np.array([0.7, -1.2]),
        "f2": rng.uniform(0.0, 1.0, (201, 201)),
    }


def best(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--points", type=int, nargs="+", default=[1001, 100001])
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels are not built; only the fallback can be timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':26s} {'points':>8s} {'cython us':>11s} {'python us':>11s} {'speedup':>8s}")
    for n in args.points:
        a = inputs(n, rng)
        for name, case in CASES.items():
            size = "201x201" if name.endswith("2d") else str(n)
            t_py = best(lambda: case(fallback, a), args.repeat)
            if kernels.compiled is None:
                print(f"{name:26s} {size:>8s} {'-':>11s} {t_py * 1e6:11.1f} {'-':>8s}")
                continue
            t_c = best(lambda: case(kernels.compiled, a), args.repeat)
            print(f"{name:26s} {size:>8s} {t_c * 1e6:11.1f} {t_py * 1e6:11.1f} {t_py / t_c:8.2f}")


if __name__ == "__main__":
    main()
