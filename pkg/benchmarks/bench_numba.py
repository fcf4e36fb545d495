#!/usr/bin/env python3
"""Compiled vs interpreted timings for each hot kernel.

Every jitted kernel keeps its Python source on ``.py_func``, so both paths
run in one process on identical inputs. Outputs are compared before any
timing is reported. While the interpreted path runs, every jitted name in
the kernels module is swapped for its ``py_func`` so nested calls stay
interpreted too.

    python benchmarks/bench_numba.py --n 400 --reps 5 --csv numba.csv
"""

import argparse
import csv
import sys
import time
from contextlib import contextmanager

import numpy as np

from curvkit import kernels
from curvkit._accel import backend
from curvkit.generators import GenSpec, generate


def _time(fn, args, reps):
    fn(*args)  # warm-up, triggers compilation on the jitted path
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        out.append(time.perf_counter() - t0)
    return float(np.median(out))


@contextmanager
def interpreted():
    saved = {k: v for k, v in vars(kernels).items() if hasattr(v, "py_func")}
    try:
        for k, v in saved.items():
            setattr(kernels, k, v.py_func)
        yield
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)
    return np.isclose(a, b, rtol=1e-12, atol=1e-12)


def cases(n, seed):
    g = generate(GenSpec("nw", n, k=10, p=0.1, seed=seed))
    indptr, indices, weights, eids = g.csr
    rng = np.random.default_rng(seed)
    src = rng.choice(n, size=12, replace=False).astype(np.int64)
    dst = rng.choice(n, size=12, replace=False).astype(np.int64)
    a = rng.random(11)
    b = rng.random(11)
    C = rng.integers(0, 4, size=(11, 11)).astype(np.float64)
    return {
        "component_labels": (kernels.component_labels, (n, indptr, indices)),
        "bfs_hops": (kernels.bfs_hops, (n, indptr, indices, 0)),
        "dijkstra": (kernels.dijkstra, (n, indptr, indices, weights, 0)),
        "multi_source_hops": (kernels.multi_source_hops, (n, indptr, indices, src, dst)),
        "brandes": (kernels.brandes, (n, g.m, indptr, indices, eids)),
        "transport_simplex": (kernels.transport_simplex, (a / a.sum(), b / b.sum(), C, 1e-12, 10_000)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="also write results to this CSV file")
    args = ap.parse_args(argv)

    if backend() != "numba":
        print("numba disabled (CURVKIT_DISABLE_NUMBA); nothing to compare", file=sys.stderr)
        return 1

    rows = []
    print(f"{'kernel':<20}{'numba_s':>12}{'python_s':>12}{'speedup':>10}")
    for name, (kern, kargs) in cases(args.n, args.seed).items():
        ref = kern(*kargs)
        t_jit = _time(kern, kargs, args.reps)
        with interpreted():
            if not _same(ref, kern.py_func(*kargs)):
                print(f"{name}: compiled and interpreted outputs differ", file=sys.stderr)
                return 1
            t_py = _time(kern.py_func, kargs, args.reps)
        rows.append({"kernel": name, "n": args.n, "numba_s": t_jit, "python_s": t_py, "speedup": t_py / t_jit})
        print(f"{name:<20}{t_jit:>12.2e}{t_py:>12.2e}{t_py / t_jit:>9.1f}x")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fieldnames=list(rows[0]))
            wr.writeheader()
            wr.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
