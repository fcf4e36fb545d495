"""Thread-count resolution and an order-preserving parallel map."""

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager


def resolve_threads(threads=None):
    if threads is None:
        env = os.environ.get("CURVKIT_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def ordered_map(func, items, threads=None, chunk=64):
    """``[func(x) for x in items]`` computed on up to ``threads`` workers.

    Output order never depends on scheduling.
    """
    items = list(items)
    threads = resolve_threads(threads)
    if threads == 1 or len(items) <= chunk:
        return [func(x) for x in items]
    blocks = [items[i : i + chunk] for i in range(0, len(items), chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda blk: [func(x) for x in blk], blocks))
    return [r for part in parts for r in part]


@contextmanager
def single_threaded_blas():
    """Pin BLAS/LAPACK to one thread so dense factorizations are bit-stable."""
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        yield
        return
    with threadpool_limits(limits=1):
        yield
