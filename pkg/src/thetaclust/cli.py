"""Command-line interface: ``thetaclust {gen,cluster,sweep,bench,eval}``.

Exit codes: 0 on success, 2 for usage errors (bad or missing flags), 1 for
runtime and data errors such as unreadable or malformed files.
"""
import argparse
import json
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import datagen
from .analysis import optimal_theta_ranges, theta_sweep
from .baselines import KMeansConfig, kmeans
from .core import Metric
from .metrics import nmi, ssd_centroid_score
from .theta import ThetaParams, tdg, tnc, tsg

METHODS = ("tsg", "tdg", "tnc", "kmeans")
THETA_METHODS = ("tsg", "tdg", "tnc")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2**64), got {text}")
    return value


def _nonneg(text):
    value = float(text)
    if not value >= 0 or math.isnan(value):
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _positive(text):
    value = float(text)
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _posint(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _counts(text):
    parts = [_posint(p) for p in text.split(",")]
    return parts[0] if len(parts) == 1 else parts


def _write_text(path, text):
    datagen._atomic_write(path, text)


def _load_matrix(path):
    try:
        return datagen.load_matrix(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None


def _load_labels(path, n=None):
    try:
        labels = datagen.load_labels(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if n is not None and labels.shape[0] != n:
        raise DataError(f"{path} has {labels.shape[0]} labels, expected {n}")
    return labels


# -- gen ---------------------------------------------------------------


def cmd_gen(args):
    if args.kind == "grid":
        X, truth = datagen.grid_blobs(args.rows, args.cols, args.sep, args.sigma, args.per_cluster, args.seed)
    else:
        X, truth = datagen.highdim_blobs(args.k, args.d, args.offset, args.sigma, args.per_cluster, args.seed)
    paths = datagen.write_dataset(X, truth, args.out)
    summary = {
        "kind": args.kind,
        "n_samples": int(X.shape[0]),
        "n_features": int(X.shape[1]),
        "n_clusters": truth.n_clusters,
        "separation": truth.separation,
        "sigma": truth.sigma,
        "seed": args.seed,
        "files": [str(p) for p in paths],
    }
    print(json.dumps(summary, indent=2))
    return 0


# -- cluster -----------------------------------------------------------


def method_params(method, args):
    """Parameters of ``method`` keyed by their CLI flag names."""
    if method == "tsg":
        return {"theta": args.theta, "centroid-update": args.centroid_update}
    if method == "tdg":
        return {"theta": args.theta, "iters": args.iters, "seed": args.seed, "centroid-update": args.centroid_update}
    if method == "tnc":
        return {
            "theta": args.theta,
            "iters": args.iters,
            "epsilon": args.epsilon,
            "seed": args.seed,
            "centroid-update": args.centroid_update,
        }
    return {"k": args.k, "n-init": args.n_init, "max-iter": args.max_iter, "tol": args.tol, "seed": args.seed}


def run_method(method, X, params):
    """Run one method; returns (Clustering, RunStats)."""
    if method == "tsg":
        return tsg(X, params["theta"], centroid_update=params["centroid-update"])
    if method == "tdg":
        return tdg(X, params["theta"], params["iters"], params["seed"], centroid_update=params["centroid-update"])
    if method == "tnc":
        theta_params = ThetaParams(
            params["theta"], params["iters"], params["epsilon"], centroid_update=params["centroid-update"]
        )
        clustering, _, stats = tnc(X, theta_params, params["seed"])
        return clustering, stats
    if params["k"] > X.shape[0]:
        raise DataError(f"k={params['k']} exceeds the number of samples {X.shape[0]}")
    config = KMeansConfig(params["k"], params["n-init"], params["max-iter"], params["tol"], params["seed"])
    return kmeans(X, config)


def default_ssd_tol(method, params):
    return params["theta"] / 2.0 if method in THETA_METHODS else None


def _scores(clustering, truth_labels, truth_centroids, tol):
    scores = {"nmi": None, "ssd": None, "ssd_tol": None}
    if truth_labels is not None:
        scores["nmi"] = nmi(clustering.labels, truth_labels)
    if truth_centroids is not None and tol is not None:
        scores["ssd"] = ssd_centroid_score(clustering.centroids, truth_centroids, tol)
        scores["ssd_tol"] = tol
    return scores


def report_to_argv(report, data_path):
    """Rebuild the ``cluster`` command line that reproduces ``report``."""
    argv = ["cluster", report["method"], str(data_path)]
    for flag, value in report["parameters"].items():
        argv += [f"--{flag}", repr(value) if isinstance(value, float) else str(value)]
    return argv


def cmd_cluster(args):
    if args.method in THETA_METHODS and args.theta is None:
        raise UsageError(f"{args.method} requires --theta")
    if args.method == "kmeans" and args.k is None:
        raise UsageError("kmeans requires --k")
    X = _load_matrix(args.data)
    truth = _load_labels(args.truth, X.shape[0]) if args.truth else None
    truth_centroids = _load_matrix(args.truth_centroids) if args.truth_centroids else None

    params = method_params(args.method, args)
    clustering, stats = run_method(args.method, X, params)
    tol = args.ssd_tol if args.ssd_tol is not None else default_ssd_tol(args.method, params)
    report = {
        "method": args.method,
        "parameters": params,
        "metric": args.metric,
        "k_found": clustering.n_clusters,
        **_scores(clustering, truth, truth_centroids, tol),
        "wall_time": stats.wall_time,
        "distance_evaluations": stats.distance_evaluations,
        "seed": params.get("seed"),
    }
    labels_out = Path(args.labels_out) if args.labels_out else Path(args.data).with_suffix(f".{args.method}.labels")
    datagen.write_labels(clustering.labels, labels_out)
    report["labels_file"] = str(labels_out)
    text = json.dumps(report, indent=2)
    if args.report_out:
        _write_text(args.report_out, text + "\n")
    print(text)
    return 0


# -- sweep -------------------------------------------------------------


def theta_grid(low, high, step):
    if step <= 0:
        raise UsageError("--theta-step must be > 0")
    if high < low:
        raise UsageError(f"--theta-max ({high}) is below --theta-min ({low})")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [round(low + i * step, 12) for i in range(count)]


def cmd_sweep(args):
    thetas = theta_grid(args.theta_min, args.theta_max, args.theta_step)
    X = _load_matrix(args.data)
    truth = _load_labels(args.truth, X.shape[0]) if args.truth else None
    sweep = theta_sweep(X, thetas, args.iters, args.seed, truth)
    intervals = optimal_theta_ranges(sweep, args.target_k)
    result = {
        "parameters": {"iters": args.iters, "seed": args.seed, "metric": args.metric},
        "rows": [
            {"theta": r.theta, "k_found": r.k_found, "nmi": r.nmi, "wall_time": r.wall_time} for r in sweep.rows
        ],
        "intervals": [
            {"low": i.low, "high": i.high, "k_found": i.k_found, "width": i.width} for i in intervals
        ],
    }
    text = json.dumps(result, indent=2)
    if args.json_out:
        _write_text(args.json_out, text + "\n")
    if args.csv_out:
        lines = ["theta,k_found,nmi,wall_time"]
        lines += [f"{r.theta!r},{r.k_found},{'' if r.nmi is None else repr(r.nmi)},{r.wall_time!r}" for r in sweep.rows]
        _write_text(args.csv_out, "\n".join(lines) + "\n")
    print(text)
    return 0


# -- bench -------------------------------------------------------------

_BENCH_KEYS = {
    "tsg": {"theta": float, "centroid-update": str},
    "tdg": {"theta": float, "iters": int, "seed": int, "centroid-update": str},
    "tnc": {"theta": float, "iters": int, "epsilon": float, "seed": int, "centroid-update": str},
    "kmeans": {"k": int, "n-init": int, "max-iter": int, "tol": float, "seed": int},
}
_BENCH_DEFAULTS = {
    "tsg": {"centroid-update": "running_mean"},
    "tdg": {"iters": 10, "seed": 0, "centroid-update": "running_mean"},
    "tnc": {"iters": 10, "epsilon": 0.0, "seed": 0, "centroid-update": "running_mean"},
    "kmeans": {"n-init": 10, "max-iter": 300, "tol": 1e-4, "seed": 0},
}


def parse_method_spec(text):
    """Parse ``name[:key=value,...]``, e.g. ``tdg:theta=3.6,iters=50``."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in METHODS:
        raise UsageError(f"unknown method {name!r}; valid methods: {', '.join(METHODS)}")
    params = dict(_BENCH_DEFAULTS[name])
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip().replace("_", "-")
        if not sep or key not in _BENCH_KEYS[name]:
            valid = ", ".join(_BENCH_KEYS[name])
            raise UsageError(f"bad parameter {item!r} for {name}; valid keys: {valid}")
        try:
            params[key] = _BENCH_KEYS[name][key](value.strip())
        except ValueError:
            raise UsageError(f"bad value in {item!r} for {name}") from None
    required = "k" if name == "kmeans" else "theta"
    if required not in params:
        raise UsageError(f"{name} requires {required}=...")
    return name, params


def bench(X, methods, repeats, truth=None, truth_centroids=None, ssd_tol=None):
    """Time each (name, params) method ``repeats`` times after one untimed
    warm-up run and score the last run.

    The SSD tolerance defaults to half the threshold of the first
    threshold-based method, so every method is scored at the same
    tolerance.
    """
    if ssd_tol is None:
        ssd_tol = next((p["theta"] / 2.0 for m, p in methods if m in THETA_METHODS), None)
    rows = []
    for name, params in methods:
        run_method(name, X, params)
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            clustering, stats = run_method(name, X, params)
            times.append(time.perf_counter() - start)
        rows.append(
            {
                "method": name,
                "parameters": params,
                "k_found": clustering.n_clusters,
                **_scores(clustering, truth, truth_centroids, ssd_tol),
                "median_wall_time": statistics.median(times),
                "wall_times": times,
                "distance_evaluations": stats.distance_evaluations,
            }
        )
    return rows


def format_table(rows):
    header = ["method", "K", "NMI", "SSD%", "median_s", "dist_evals"]
    body = []
    for r in rows:
        body.append(
            [
                r["method"],
                str(r["k_found"]),
                "-" if r["nmi"] is None else f"{r['nmi']:.4f}",
                "-" if r["ssd"] is None else f"{r['ssd']:.1f}",
                f"{r['median_wall_time']:.4f}",
                str(r["distance_evaluations"]),
            ]
        )
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in [header] + body]
    return "\n".join(lines)


def cmd_bench(args):
    methods = [parse_method_spec(m) for m in args.method]
    X = _load_matrix(args.data)
    truth = _load_labels(args.truth, X.shape[0]) if args.truth else None
    truth_centroids = _load_matrix(args.truth_centroids) if args.truth_centroids else None
    for name, params in methods:
        if name == "kmeans" and params["k"] > X.shape[0]:
            raise DataError(f"k={params['k']} exceeds the number of samples {X.shape[0]}")
    rows = bench(X, methods, args.repeats, truth, truth_centroids, args.ssd_tol)
    result = {"repeats": args.repeats, "metric": args.metric, "results": rows}
    if args.json_out:
        _write_text(args.json_out, json.dumps(result, indent=2) + "\n")
    print(format_table(rows))
    print(json.dumps(result, indent=2))
    return 0


# -- eval --------------------------------------------------------------


def cmd_eval(args):
    a = _load_labels(args.labels_a)
    b = _load_labels(args.labels_b)
    if a.shape[0] != b.shape[0]:
        raise DataError(f"length mismatch: {args.labels_a} has {a.shape[0]} labels, {args.labels_b} has {b.shape[0]}")
    result = {"nmi": nmi(a, b)}
    if args.centroids_a or args.centroids_b:
        if not (args.centroids_a and args.centroids_b and args.tol is not None):
            raise UsageError("SSD needs --centroids-a, --centroids-b and --tol")
        ca = _load_matrix(args.centroids_a)
        cb = _load_matrix(args.centroids_b)
        if ca.shape[1] != cb.shape[1]:
            raise DataError(f"centroid files differ in dimension: {ca.shape[1]} vs {cb.shape[1]}")
        result["ssd"] = ssd_centroid_score(ca, cb, args.tol)
    print(json.dumps(result))
    return 0


# -- parser ------------------------------------------------------------


def _add_common(p, seed=True):
    p.add_argument("--metric", default="euclidean", choices=[m.value for m in Metric])
    if seed:
        p.add_argument("--seed", type=_seed, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="thetaclust", description="Distance-threshold clustering toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic dataset")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    grid = gen_sub.add_parser("grid", help="2-D Gaussian blobs on a grid")
    grid.add_argument("--rows", type=_posint, required=True)
    grid.add_argument("--cols", type=_posint, required=True)
    grid.add_argument("--sep", type=_positive, required=True)
    hd = gen_sub.add_parser("highdim", help="Gaussian blobs along the diagonal of R^d")
    hd.add_argument("--k", type=_posint, required=True)
    hd.add_argument("--d", type=_posint, required=True)
    hd.add_argument("--offset", type=_positive, required=True)
    for p in (grid, hd):
        p.add_argument("--sigma", type=_positive, required=True)
        p.add_argument("--per-cluster", type=_counts, required=True, help="count, or comma list per cluster")
        p.add_argument("--out", default="dataset", help="output path prefix (default: dataset)")
        _add_common(p)
        p.set_defaults(func=cmd_gen)

    cl = sub.add_parser("cluster", help="cluster a data file")
    cl.add_argument("method", choices=METHODS)
    cl.add_argument("data")
    cl.add_argument("--theta", type=_nonneg)
    cl.add_argument("--iters", type=_posint, default=10)
    cl.add_argument("--epsilon", type=_nonneg, default=0.0)
    cl.add_argument("--centroid-update", choices=["running_mean", "frozen"], default="running_mean")
    cl.add_argument("--k", type=_posint)
    cl.add_argument("--n-init", type=_posint, default=10)
    cl.add_argument("--max-iter", type=_posint, default=300)
    cl.add_argument("--tol", type=_nonneg, default=1e-4)
    cl.add_argument("--truth", help="ground-truth label file")
    cl.add_argument("--truth-centroids", help="ground-truth centroid file")
    cl.add_argument("--ssd-tol", type=_nonneg, help="SSD tolerance (default: theta / 2)")
    cl.add_argument("--labels-out")
    cl.add_argument("--report-out")
    _add_common(cl)
    cl.set_defaults(func=cmd_cluster)

    sw = sub.add_parser("sweep", help="run TDG over a grid of thresholds")
    sw.add_argument("data")
    sw.add_argument("--theta-min", type=_nonneg, required=True)
    sw.add_argument("--theta-max", type=_nonneg, required=True)
    sw.add_argument("--theta-step", type=float, required=True)
    sw.add_argument("--iters", type=_posint, default=10)
    sw.add_argument("--truth")
    sw.add_argument("--target-k", type=_posint)
    sw.add_argument("--json-out")
    sw.add_argument("--csv-out")
    _add_common(sw)
    sw.set_defaults(func=cmd_sweep)

    bn = sub.add_parser("bench", help="compare methods head to head")
    bn.add_argument("data")
    bn.add_argument(
        "--method",
        action="append",
        required=True,
        help="name[:key=value,...], repeatable; e.g. tdg:theta=3.6,iters=50 or kmeans:k=25,n_init=10",
    )
    bn.add_argument("--truth")
    bn.add_argument("--truth-centroids")
    bn.add_argument("--ssd-tol", type=_nonneg)
    bn.add_argument("--repeats", type=_posint, default=5)
    bn.add_argument("--json-out")
    _add_common(bn, seed=False)
    bn.set_defaults(func=cmd_bench)

    ev = sub.add_parser("eval", help="compare two label files")
    ev.add_argument("labels_a")
    ev.add_argument("labels_b")
    ev.add_argument("--centroids-a")
    ev.add_argument("--centroids-b")
    ev.add_argument("--tol", type=_nonneg)
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"thetaclust: error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError, ValueError, RuntimeError) as exc:
        print(f"thetaclust: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
