"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 4,8,16] [--repeat 5]

Prints one row per (kernel, n) with the best-of-repeat time per call for
each backend and the speedup, then one end-to-end row for the theorem
command on dims 2,3,2.
"""
import argparse
import timeit

import numpy as np

from vnideals import _backend
from vnideals._kernels_py import gaussian_matrix as py_gaussian
from vnideals.cli import ExperimentConfig, cmd_theorem


def inputs(n):
    g = py_gaussian(n, 12345)
    herm = (g + g.conj().T) / 2
    low_rank = g[:, : max(1, n // 2)] @ g[: max(1, n // 2), :]
    return {
        "jacobi_eigh": lambda k: k.jacobi_eigh(herm),
        "echelon_rank": lambda k: k.echelon_rank(low_rank, 1e-9),
        "mgs_columns": lambda k: k.mgs_columns(g),
        "gaussian_matrix": lambda k: k.gaussian_matrix(n, 7),
    }


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,8,16,32")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not _backend.COMPILED_AVAILABLE:
        raise SystemExit("compiled extension is not built; run `pip install --no-build-isolation -e .` first")
    compiled, python = _backend.get("compiled"), _backend.get("python")
    print(f"{'kernel':<16}{'n':>4}{'compiled':>14}{'python':>14}{'speedup':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, call in inputs(n).items():
            tc = best_time(lambda: call(compiled), args.repeat)
            tp = best_time(lambda: call(python), args.repeat)
            print(f"{name:<16}{n:>4}{tc * 1e6:>12.1f}us{tp * 1e6:>12.1f}us{tp / tc:>9.1f}x")
    np.testing.assert_array_equal(compiled.gaussian_matrix(8, 1), python.gaussian_matrix(8, 1))

    config = ExperimentConfig((2, 3, 2), trials=10, samples=4)
    times = {}
    for name in ("compiled", "python"):
        previous = _backend.use(name)
        try:
            times[name] = min(timeit.repeat(lambda: cmd_theorem(config), number=1, repeat=args.repeat))
        finally:
            _backend.use(previous)
    print(f"{'theorem 2,3,2':<20}{times['compiled'] * 1e3:>12.1f}ms{times['python'] * 1e3:>12.1f}ms"
          f"{times['python'] / times['compiled']:>9.1f}x")


if __name__ == "__main__":
    main()
