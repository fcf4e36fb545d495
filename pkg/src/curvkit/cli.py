"""Command-line entry point.

Exit codes: 0 ok, 1 internal failure, 2 user or validation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import analysis, bench, verify
from .errors import CurvkitError, DisconnectedGraph, NoUniqueHub
from .generators import MODELS, GenSpec, equal_sizes, generate
from .graph import is_connected, load_edge_list, load_tu_dataset, serialize_edge_list
from .ollivier import or_curvature
from .parallel import resolve_threads
from .propagation import pool_reweight
from .resistance import resistance_curvature

log = logging.getLogger("curvkit")

EXIT_OK, EXIT_INTERNAL, EXIT_USER, EXIT_VERIFY = 0, 1, 2, 3
MODEL_ALIASES = {"rr": "random-regular", "kleinberg": "kleinberg-ring"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse prints usage plus message; we want one line and our own exit code
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return val


def build_parser():
    p = _Parser(prog="curvkit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, need_in=True):
        if need_in:
            sp.add_argument("--in", dest="inp", required=True, help="edge-list file ('-' for stdin)")
        sp.add_argument("--out", help="output path (stdout if omitted)")
        sp.add_argument("--threads", type=_positive_int, help="worker cap (default: CURVKIT_THREADS or all cores)")

    sp = sub.add_parser("resistance", help="resistance curvature of a graph")
    common(sp)
    sp.add_argument("--epsilon", type=float, help="diagonal shift (default 1e-8 * mean weighted degree)")
    sp.add_argument("--mode", choices=("auto", "full-matrix", "per-edge-solve"), default="auto")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("ollivier", help="Ollivier-Ricci curvature of a graph")
    common(sp)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--metric", choices=("unit", "weight"), default="unit")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("generate", help="sample a random graph")
    common(sp, need_in=False)
    sp.add_argument("--model", required=True, choices=sorted(set(MODELS) | set(MODEL_ALIASES)))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=2, help="lattice degree (even)")
    sp.add_argument("--p", type=float, default=0.1)
    sp.add_argument("--q", type=float, default=0.0)
    sp.add_argument("--exponent", type=float, default=1.0)
    sp.add_argument("--long-range", type=int, default=1)
    sp.add_argument("--sizes", type=_int_list, help="SBM block sizes, comma-separated")
    sp.add_argument("--blocks", type=int, help="SBM: split n into this many equal blocks")
    sp.add_argument("--d", type=int, default=3, help="random-regular degree")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--require-connected", action="store_true")

    sp = sub.add_parser("analyze", help="distribution, density and pattern tables")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="inp", action="append", help="edge-list file (repeatable)")
    src.add_argument("--tu", help="TUDataset directory")
    sp.add_argument("--name", help="TUDataset prefix (inferred if omitted)")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--curvature", choices=("resistance", "ollivier"), default="resistance")
    sp.add_argument("--bins", type=_positive_int, default=20)
    sp.add_argument("--bandwidth", type=float)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--no-patterns", action="store_true", help="skip the community/hub pattern table")
    sp.add_argument("--threads", type=_positive_int)

    sp = sub.add_parser("bench", help="time resistance against Ollivier-Ricci curvature")
    sp.add_argument("--models", default="nw", help="comma-separated models (nw, rr, ws, ...)")
    sp.add_argument("--n", type=_int_list, default=[1000])
    sp.add_argument("--deg", type=_int_list, default=[10])
    sp.add_argument("--p", type=float, default=0.1)
    sp.add_argument("--reps", type=_positive_int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="CSV path (stdout if omitted)")
    sp.add_argument("--threads", type=_positive_int)

    sp = sub.add_parser("reweight", help="scale edge weights by (1 - eta * curvature)")
    common(sp)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--curvature", choices=("resistance", "ollivier"), default="resistance")
    sp.add_argument("--alpha", type=float, default=0.5)

    sp = sub.add_parser("verify", help="run the oracle and property checks")
    sp.add_argument("--out", help="JSON report path (stdout if omitted)")
    return p


# --- helpers ----------------------------------------------------------------


def _read_graph(path):
    if path == "-":
        return load_edge_list(sys.stdin.read())
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    with open(path, encoding="utf8") as fh:
        return load_edge_list(fh.read())


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf8", newline="") as fh:
        fh.write(text)


def _clean(obj):
    # strict JSON has no NaN
    if isinstance(obj, float) and obj != obj:
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dump_json(obj):
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _edge_csv(rows, fields):
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    wr.writeheader()
    for r in rows:
        wr.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items() if k in fields})
    return buf.getvalue()


def _model(name):
    name = MODEL_ALIASES.get(name, name)
    if name not in MODELS:
        raise UsageError(f"unknown model {name!r}")
    return name


# --- subcommands ------------------------------------------------------------


def cmd_resistance(args):
    g = _read_graph(args.inp)
    if args.epsilon is not None and not args.epsilon > 0:
        raise UsageError("--epsilon must be positive")
    res = resistance_curvature(g, epsilon=args.epsilon, mode=args.mode, threads=args.threads)
    doc = res.to_dict(g)
    if args.format == "json":
        _emit(_dump_json(doc), args.out)
    else:
        _emit(_edge_csv(doc["edges"], ["u", "v", "w", "resistance", "k", "k_norm"]), args.out)


def cmd_ollivier(args):
    g = _read_graph(args.inp)
    if not 0.0 <= args.alpha < 1.0:
        raise UsageError("--alpha must lie in [0, 1)")
    doc = or_curvature(g, alpha=args.alpha, metric=args.metric, threads=args.threads).to_dict(g)
    if args.format == "json":
        _emit(_dump_json(doc), args.out)
    else:
        _emit(_edge_csv(doc["edges"], ["u", "v", "w", "distance", "w1", "kappa"]), args.out)


def cmd_generate(args):
    model = _model(args.model)
    sizes = tuple(args.sizes or ())
    if model == "sbm" and not sizes:
        if not args.blocks:
            raise UsageError("sbm needs --sizes or --blocks")
        sizes = equal_sizes(args.n, args.blocks)
    spec = GenSpec(
        model,
        args.n,
        k=args.k,
        p=args.p,
        q=args.q,
        exponent=args.exponent,
        long_range=args.long_range,
        sizes=sizes,
        d=args.d,
        seed=args.seed,
        require_connected=args.require_connected,
    )
    _emit(serialize_edge_list(generate(spec)), args.out)


def _load_corpus(args):
    if args.tu:
        graphs = load_tu_dataset(args.tu, args.name)
        return [(f"{args.name or 'tu'}:{i + 1}", g) for i, g in enumerate(graphs)]
    return [(path, _read_graph(path)) for path in args.inp]


def cmd_analyze(args):
    corpus = _load_corpus(args)
    os.makedirs(args.out_dir, exist_ok=True)
    usable, skipped = [], 0
    for gid, g in corpus:
        if g.m == 0 or not is_connected(g):
            skipped += 1
            continue
        usable.append((gid, g))
    if skipped:
        log.warning("skipped %d disconnected or edgeless graph(s)", skipped)
    if not usable:
        raise UsageError("no connected graph with edges in the input")

    values, graphs, selected, reports = [], [], [], []
    for gid, g in usable:
        k_res = resistance_curvature(g, threads=args.threads).k_norm
        need_or = args.curvature == "ollivier" or not args.no_patterns
        k_or = or_curvature(g, alpha=args.alpha, threads=args.threads).kappa if need_or else None
        chosen = k_res if args.curvature == "resistance" else k_or
        values.append(chosen)
        graphs.append(g)
        selected.append(chosen)
        if args.no_patterns:
            continue
        try:
            hub = analysis.find_hub(g)
        except NoUniqueHub:
            continue
        part = analysis.girvan_newman(g)
        reports.append(analysis.pattern_check(g, k_res, k_or, part, hub=hub, graph_id=gid))

    summary = analysis.summarize_distribution(np.concatenate(values), bins=args.bins, bandwidth=args.bandwidth)
    analysis.write_distribution_csv(summary, os.path.join(args.out_dir, "distribution.csv"))
    rows, rho = analysis.positive_ratio_vs_density(graphs, selected)
    for row, (gid, _) in zip(rows, usable):
        row["graph_id"] = gid
    analysis.write_density_ratio_csv(rows, os.path.join(args.out_dir, "density_ratio.csv"))
    if not args.no_patterns:
        analysis.write_patterns_csv(reports, os.path.join(args.out_dir, "patterns.csv"))
    out = {
        "graphs": len(usable),
        "skipped": skipped,
        "curvature": args.curvature,
        "mean": summary.mean,
        "std": summary.std,
        "skewness": summary.skewness,
        "positive_fraction": summary.positive_fraction,
        "bandwidth": summary.bandwidth,
        "spearman_density_positive": None if np.isnan(rho) else rho,
        "pattern_graphs": len(reports),
        "pattern_rates": None if args.no_patterns else analysis.pattern_rates(reports),
    }
    sys.stdout.write(_dump_json(out))


def cmd_bench(args):
    models = [_model(m.strip()) for m in args.models.split(",") if m.strip()]
    specs = []
    for model in models:
        for n in args.n:
            for deg in args.deg:
                if model == "random-regular":
                    specs.append(GenSpec(model, n, d=deg, seed=args.seed))
                else:
                    specs.append(GenSpec(model, n, k=deg, p=args.p, seed=args.seed))
    for spec in specs:
        spec.validate()
    records, speedups, errors = bench.bench_compare(specs, reps=args.reps, threads=args.threads)
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=bench.CSV_FIELDS, lineterminator="\n")
    wr.writeheader()
    for rec in records:
        wr.writerow(rec.row())
    _emit(buf.getvalue(), args.out)
    for row in speedups:
        log.info("speedup %s n=%d deg=%d: %.1fx", row["model"], row["n"], row["degree"], row["speedup"])
    for spec, msg in errors:
        print(f"curvkit: bench skipped {spec.describe()}: {msg}", file=sys.stderr)
    if errors and not records:
        raise UsageError("every benchmark configuration failed")


def cmd_reweight(args):
    if not 0.0 <= args.eta <= 1.0:
        raise UsageError("--eta must lie in [0, 1]")
    g = _read_graph(args.inp)
    if args.curvature == "resistance":
        k = resistance_curvature(g, threads=args.threads).k_norm
    else:
        k = or_curvature(g, alpha=args.alpha, threads=args.threads).kappa
    _emit(serialize_edge_list(pool_reweight(g, k, args.eta)), args.out)


def cmd_verify(args):
    results = verify.run_all()
    for r in results:
        log.info("%s: %s (%.2fs)", r["name"], "pass" if r["passed"] else "FAIL", r.pop("_seconds"))
    ok = all(r["passed"] for r in results)
    _emit(_dump_json({"passed": ok, "checks": results}), args.out)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "resistance": cmd_resistance,
    "ollivier": cmd_ollivier,
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
    "reweight": cmd_reweight,
    "verify": cmd_verify,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"curvkit: error: {exc}", file=sys.stderr)
        return EXIT_USER
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "threads", None) is None and hasattr(args, "threads"):
            args.threads = resolve_threads(None)
        code = COMMANDS[args.cmd](args)
    except (UsageError, CurvkitError, ValueError, OSError) as exc:
        msg = str(exc) if not isinstance(exc, DisconnectedGraph) else "graph is disconnected"
        print(f"curvkit: error: {msg}".splitlines()[0], file=sys.stderr)
        return EXIT_USER
    except Exception as exc:  # anything else is a bug, not a user error
        print(f"curvkit: internal error: {type(exc).__name__}: {exc}".splitlines()[0], file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
