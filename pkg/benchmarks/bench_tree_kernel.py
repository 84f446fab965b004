"""Compare the compiled and numpy tree kernels.

    python benchmarks/bench_tree_kernel.py [--rows 400] [--trees 50] [--repeat 5]

Grows the same bootstrap trees with both kernels, checks that they are
identical, and reports the best-of-``repeat`` time per tree.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from discomplex.learn import _tree_py
from discomplex.learn.forest import _xlogx
from discomplex.synth import planted_dataset

try:
    from discomplex.learn import _tree_ext
except ImportError:
    _tree_ext = None


def workload(rows: int, trees: int, noise: float, seed: int):
    X, y = planted_dataset(rows, noise=noise, seed=seed)
    y = y.astype(np.int64)
    rng = np.random.default_rng(seed)
    samples = [rng.integers(0, rows, size=rows) for _ in range(trees)]
    features = np.arange(X.shape[1], dtype=np.int64)
    table = _xlogx(rows)
    return [(X, y, s, features, 4, -1, 1, i, table) for i, s in enumerate(samples)]


def grow_all(kernel, jobs):
    return [kernel.build_tree(*job) for job in jobs]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=400)
    ap.add_argument("--trees", type=int, default=50)
    ap.add_argument("--noise", type=float, default=0.2)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    jobs = workload(args.rows, args.trees, args.noise, args.seed)
    kernels = {"numpy": _tree_py}
    if _tree_ext is not None:
        kernels["cython"] = _tree_ext
    else:
        print("compiled kernel not built; timing the numpy kernel only")

    results = {name: grow_all(k, jobs) for name, k in kernels.items()}
    nodes = np.mean([len(t[0]) for t in results["numpy"]])
    if "cython" in results:
        same = all(all(np.array_equal(a, b) for a, b in zip(ta, tb))
                   for ta, tb in zip(results["cython"], results["numpy"]))
        print(f"identical trees: {same}")

    print(f"{args.trees} trees, {args.rows} rows, {nodes:.0f} nodes per tree on average")
    timings = {}
    for name, k in kernels.items():
        best = min(timeit.repeat(lambda: grow_all(k, jobs), number=1, repeat=args.repeat))
        timings[name] = best / args.trees
        print(f"{name:>7}: {1000 * timings[name]:8.3f} ms per tree")
    if len(timings) == 2:
        print(f"speed-up: {timings['numpy'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()
