"""Command-line front end.

Usage::

    qnetsim generate   --config net.json --out DIR
    qnetsim metrics    --config net.json --out DIR      (or --graph DIR/graph.edgelist)
    qnetsim sweep      --config sweep.json --out DIR
    qnetsim robustness --config robust.json --out DIR
    qnetsim fitcheck   --config fit.json --out DIR      (or --input sweep.csv)

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import io
import logging
import math
import os
import sys
from dataclasses import replace

from . import __version__
from .config import NetworkConfig
from .ensemble import SweepSpec, calibrate_radius, run_robustness, sweep
from .errors import ConfigError, InvalidParameterError
from .graph import read_edgelist, write_edgelist
from .graphcore import components
from .metrics import REPORT_COLUMNS, kmed_closed_form, metric_report, small_world_prediction
from .netgen import generate
from .results import atomic_write_text, read_csv, write_csv, write_json
from .robustness import breakdown_fraction
from .runconfig import FitcheckSpec, RobustnessSpec, config_to_dict, parse_config

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


class MissingInputError(RuntimeError):
    pass


def _common(p):
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--seed", type=int, help="override the base seed (unsigned 64-bit)")
    p.add_argument("--realizations", type=int, help="override the number of realizations")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes (default: machine parallelism)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key; dotted keys reach nested objects (repeatable)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="qnetsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("generate", help="generate one graph and write its edge list")
    _common(p)
    p = sub.add_parser("metrics", help="structural metrics of one graph")
    _common(p)
    p.add_argument("--graph", help="read this edge-list file instead of generating")
    p = sub.add_parser("sweep", help="ensemble metrics along a parameter axis")
    _common(p)
    p = sub.add_parser("robustness", help="failure/attack curve and critical fraction")
    _common(p)
    p = sub.add_parser("fitcheck", help="compare a sweep CSV to the fitted closed forms")
    _common(p)
    p.add_argument("--input", help="sweep CSV to check (overrides sweep_csv in the config)")
    return parser


def _load(args, want):
    if not args.config:
        raise ConfigError("not-found", "--config is required for this command")
    spec = parse_config(args.config, args.overrides)
    if not isinstance(spec, want):
        raise ConfigError("constraint-violation",
                          f"{args.command} needs a {want.__name__} configuration", args.config)
    try:
        if args.seed is not None:
            if isinstance(spec, NetworkConfig):
                spec = spec.with_seed(args.seed)
            elif hasattr(spec, "base"):
                spec = replace(spec, base=spec.base.with_seed(args.seed))
        if args.realizations is not None and hasattr(spec, "realizations"):
            spec = replace(spec, realizations=args.realizations)
    except (ValueError, TypeError) as exc:
        raise ConfigError("constraint-violation", str(exc)) from exc
    return spec


def _geometry(config):
    return {"radius": config.disk_radius, "rho": config.density}


def cmd_generate(args):
    config = _load(args, NetworkConfig)
    g = generate(config)
    path = os.path.join(args.out, "graph.edgelist")
    buf = io.StringIO()
    write_edgelist(g, buf)
    atomic_write_text(path, buf.getvalue())
    giant = components(g).giant_size
    summary = {"config": config_to_dict(config), "derived": _geometry(config), "n": g.n,
               "n_edges": g.n_edges, "giant_size": giant, "giant_fraction": giant / g.n,
               "version": __version__}
    write_json(os.path.join(args.out, "generate.json"), summary)
    print(f"wrote {path}: n={g.n} edges={g.n_edges} giant_fraction={giant / g.n!r}")


def cmd_metrics(args):
    if args.graph:
        with open(args.graph) as fh:
            g = read_edgelist(fh)
        source = {"graph": os.path.abspath(args.graph)}
    else:
        config = _load(args, NetworkConfig)
        g = generate(config)
        source = {"config": config_to_dict(config), "derived": _geometry(config)}
    report = metric_report(g)
    write_csv(os.path.join(args.out, "metrics.csv"), REPORT_COLUMNS, [report.row()])
    hist = [[k, p] for k, p in enumerate(report.degree_histogram)]
    write_csv(os.path.join(args.out, "degree_histogram.csv"), ("k", "p_k"), hist)
    write_json(os.path.join(args.out, "metrics.json"), {"source": source, "version": __version__})
    print(" ".join(f"{c}={v}" for c, v in zip(REPORT_COLUMNS, report.row())))


def cmd_sweep(args):
    spec = _load(args, SweepSpec)
    result = sweep(spec, threads=args.threads)
    path = os.path.join(args.out, "sweep.csv")
    write_csv(path, result.columns(), result.rows())
    write_json(os.path.join(args.out, "sweep.json"),
               {"config": config_to_dict(spec), "columns": result.columns(),
                "points": [{"value": v, **_geometry(p.config)} for v, p in zip(spec.values, result.points)],
                "version": __version__})
    print(f"wrote {path} ({len(result.points)} points)")


def cmd_robustness(args):
    spec = _load(args, RobustnessSpec)
    config = spec.base
    if spec.target_mean_degree is not None:
        if config.model in ("SBQI", "OFBQI"):
            config = calibrate_radius(config, spec.target_mean_degree)
        elif config.model == "ER":
            config = replace(config, er_mean_degree=spec.target_mean_degree)
        else:
            config = replace(config, ba_m=max(1, int(round(spec.target_mean_degree / 2))))
    curve = run_robustness(config, spec.protocol, spec.realizations, mode=spec.mode,
                           grid_step=spec.grid_step, refine_step=spec.refine_step,
                           pair_budget=spec.pair_budget, threads=args.threads)
    path = os.path.join(args.out, "robustness.csv")
    write_csv(path, curve.CSV_COLUMNS, curve.rows())
    summary = {"config": config_to_dict(spec), "network": config_to_dict(config),
               "derived": _geometry(config), "protocol": spec.protocol,
               "f_c": curve.f_c, "f_c_stderr": curve.f_c_stderr,
               "breakdown_fraction": breakdown_fraction(curve), "version": __version__}
    write_json(os.path.join(args.out, "robustness.json"), summary)
    print(f"wrote {path}: f_c={curve.f_c}")


FITCHECK_COLUMNS = ("n", "rho", "radius", "k_measured", "k_predicted", "k_deviation",
                    "l_measured", "l_predicted", "l_deviation", "pass")


def fitcheck_rows(records, k_tol, l_tol):
    """Relative deviations of measured ``<k>``/``<l>`` from the fitted closed forms."""
    rows = []
    for r in records:
        for key in ("n", "rho", "radius", "mean_degree_mean", "avg_shortest_path_mean"):
            if key not in r:
                raise MissingInputError(f"sweep CSV lacks column {key!r}")
        k, l = r["mean_degree_mean"], r["avg_shortest_path_mean"]
        k_pred = kmed_closed_form(r["rho"], r["radius"])
        k_dev = abs(k - k_pred) / k_pred
        try:
            l_pred = small_world_prediction(int(r["n"]), r["rho"], k)
            l_dev = abs(l - l_pred) / l_pred
        except InvalidParameterError:
            l_pred = l_dev = float("nan")
        ok = bool(k_dev <= k_tol and l_dev <= l_tol)
        rows.append([int(r["n"]), r["rho"], r["radius"], k, k_pred, k_dev, l, l_pred, l_dev, ok])
    return rows


def cmd_fitcheck(args):
    if args.config:
        spec = _load(args, FitcheckSpec)
    else:
        spec = FitcheckSpec("")
    path = args.input or spec.sweep_csv
    if not path or not os.path.exists(path):
        raise MissingInputError(f"sweep CSV not found: {path!r}")
    records = read_csv(path)
    if not records:
        raise MissingInputError(f"sweep CSV has no rows: {path}")
    rows = fitcheck_rows(records, spec.k_tolerance, spec.l_tolerance)
    out = os.path.join(args.out, "fitcheck.csv")
    write_csv(out, FITCHECK_COLUMNS, rows)
    passed = all(r[-1] for r in rows)
    write_json(os.path.join(args.out, "fitcheck.json"),
               {"input": os.path.abspath(path), "k_tolerance": spec.k_tolerance,
                "l_tolerance": spec.l_tolerance, "pass": passed,
                "max_k_deviation": max(r[5] for r in rows),
                "max_l_deviation": max((r[8] for r in rows if not math.isnan(r[8])), default=None)})
    print(f"wrote {out}: {'PASS' if passed else 'FAIL'}")


COMMANDS = {"generate": cmd_generate, "metrics": cmd_metrics, "sweep": cmd_sweep,
            "robustness": cmd_robustness, "fitcheck": cmd_fitcheck}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        os.makedirs(args.out, exist_ok=True)
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, MissingInputError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
