"""Time the compiled inner loops against the numpy fallback.

    python benchmarks/bench_core.py [--repeat 5]

Prints one TSV row per (kernel, size): median seconds for each backend, the
speedup, and whether the two outputs are bit-identical.
"""

import argparse
import importlib
import statistics
import sys
import timeit

import numpy as np

from svmelm import _kernels_py


def _smo_problem(n, seed):
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, 8))
    y = np.where(X[:, 0] + 0.5 * g.normal(size=n) > 0, 1.0, -1.0)
    D = _kernels_py.sq_dists(X, X)
    K = np.exp(-D / 4.0)
    return np.outer(y, y) * K, y


def _median_time(fn, repeat):
    return statistics.median(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    try:
        ext = importlib.import_module("svmelm._ext")
    except ImportError:
        print("compiled core not built; nothing to compare", file=sys.stderr)
        return 1
    backends = {"compiled": ext, "python": _kernels_py}

    print("kernel\tsize\tcompiled_s\tpython_s\tspeedup\tidentical")
    g = np.random.default_rng(0)
    for n, d in ((200, 64), (500, 256), (1000, 512)):
        X, Y = g.normal(size=(n, d)), g.normal(size=(n, d))
        t = {k: _median_time(lambda m=m: m.sq_dists(X, Y), args.repeat) for k, m in backends.items()}
        same = np.array_equal(ext.sq_dists(X, Y), _kernels_py.sq_dists(X, Y))
        print(f"sq_dists\t{n}x{d}\t{t['compiled']:.4f}\t{t['python']:.4f}\t"
              f"{t['python'] / t['compiled']:.1f}\t{same}")

    for n in (50, 200, 500):
        Q, y = _smo_problem(n, n)
        run = {k: (lambda m=m: m.smo(Q, y, 10.0, 1e-3, 10000 * n)) for k, m in backends.items()}
        t = {k: _median_time(f, args.repeat) for k, f in run.items()}
        a, b = run["compiled"](), run["python"]()
        same = np.array_equal(a[0], b[0]) and a[2] == b[2]
        print(f"smo\t{n}\t{t['compiled']:.4f}\t{t['python']:.4f}\t"
              f"{t['python'] / t['compiled']:.1f}\t{same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
