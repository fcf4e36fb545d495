"""Wall-clock comparison of resistance and Ollivier-Ricci curvature."""

from __future__ import annotations

import csv
import hashlib
import logging
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .generators import generate
from .ollivier import or_curvature
from .parallel import resolve_threads
from .resistance import resistance_curvature

log = logging.getLogger(__name__)

METHODS = ("resistance", "ollivier")
CSV_FIELDS = ["method", "model", "n", "degree", "seed", "reps", "mean_s", "std_s", "threads", "checksum"]


@dataclass
class BenchRecord:
    method: str
    model: str
    n: int
    degree: int
    seed: int
    m: int
    reps: int
    times: list
    threads: int
    checksum: str

    @property
    def mean_s(self):
        return float(np.mean(self.times))

    @property
    def std_s(self):
        return float(np.std(self.times, ddof=1)) if len(self.times) > 1 else 0.0

    @property
    def median_of_means(self):
        blocks = np.array_split(np.asarray(self.times), min(3, len(self.times)))
        return float(statistics.median(float(b.mean()) for b in blocks))

    def row(self):
        return {
            "method": self.method,
            "model": self.model,
            "n": self.n,
            "degree": self.degree,
            "seed": self.seed,
            "reps": self.reps,
            "mean_s": f"{self.mean_s:.6g}",
            "std_s": f"{self.std_s:.6g}",
            "threads": self.threads,
            "checksum": self.checksum,
        }


def curvature_values(method, g, threads=1):
    if method == "resistance":
        return resistance_curvature(g, threads=threads).k
    if method == "ollivier":
        return or_curvature(g, threads=threads).kappa
    raise ValueError(f"unknown method {method!r}")


def checksum(values):
    return hashlib.sha256(np.ascontiguousarray(values, dtype=np.float64).tobytes()).hexdigest()[:16]


def time_method(method, g, reps, threads=1):
    """Warm-up once, then time ``reps`` end-to-end runs on a monotonic clock."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    ref = checksum(curvature_values(method, g, threads))
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        vals = curvature_values(method, g, threads)
        times.append(time.perf_counter() - t0)
        if checksum(vals) != ref:
            raise RuntimeError(f"{method}: output changed between repetitions")
    return times, ref


def _degree_of(spec):
    if spec.model == "random-regular":
        return spec.d
    return spec.k


def bench_compare(specs, reps=3, threads=1, methods=METHODS):
    """Time every method on every spec.

    Returns ``(records, speedups, errors)`` where ``speedups`` rows hold
    ``mean(ollivier) / mean(resistance)`` per spec. A failing spec is
    reported in ``errors`` and skipped.
    """
    threads = resolve_threads(threads)
    records, speedups, errors = [], [], []
    for spec in specs:
        try:
            g = generate(spec)
            per = {}
            for method in methods:
                times, digest = time_method(method, g, reps, threads)
                rec = BenchRecord(method, spec.model, spec.n, _degree_of(spec), spec.seed, g.m, reps, times, threads, digest)
                records.append(rec)
                per[method] = rec
                log.info("%s %s: mean %.4fs", method, spec.describe(), rec.mean_s)
        except Exception as exc:  # one bad spec must not abort the sweep
            errors.append((spec, f"{type(exc).__name__}: {exc}"))
            continue
        if "resistance" in per and "ollivier" in per:
            speedups.append(
                {
                    "model": spec.model,
                    "n": spec.n,
                    "degree": _degree_of(spec),
                    "seed": spec.seed,
                    "speedup": per["ollivier"].mean_s / per["resistance"].mean_s,
                }
            )
    return records, speedups, errors


def write_csv(records, path):
    with open(path, "w", newline="", encoding="utf8") as fh:
        wr = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        wr.writeheader()
        for rec in records:
            wr.writerow(rec.row())


def loglog_slope(ns, times):
    return float(np.polyfit(np.log(ns), np.log(times), 1)[0])
