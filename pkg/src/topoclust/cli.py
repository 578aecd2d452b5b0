"""Command-line interface: ``topoclust <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .barycenter import barycenter
from .budget import TimeBudget
from .clustering import cluster, sweep
from .errors import TopoClustError
from .fileio import (
    DIAGRAM_SUFFIX,
    FIELD_SUFFIX,
    MANIFEST,
    format_diagram,
    load_diagram,
    load_diagram_dir,
    load_ensemble,
    read_field,
    save_ensemble,
)
from .metric import LiftingParams, wasserstein
from .pipeline import RunConfig, ensemble_diagrams, parse_synth, parse_threshold, run_pipeline
from .report import dumps, result_from_json, result_to_json, score_report_to_json
from .selection import resolve_dimension, select_k

EXIT_ERROR = 1


def _duration(text):
    try:
        return TimeBudget.parse(text).max_duration
    except TopoClustError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _unit_interval(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _threads(text):
    return None if text.lower() == "auto" else _positive_int(text)


def _threshold(text):
    try:
        parse_threshold(text)
    except (TopoClustError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def _dim(text):
    if text.strip().lower() in ("auto", "plane", "points"):
        return text
    try:
        resolve_dimension(text)
    except TopoClustError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def _add_k_range(p, k_min=1, k_max=10):
    p.add_argument("--kmin", type=_positive_int, default=k_min)
    p.add_argument("--kmax", type=_positive_int, default=k_max)


def _add_diagram_options(p):
    p.add_argument("--family", choices=("minima", "maxima"), default="maxima")
    p.add_argument("--pthreshold", type=_threshold, default="auto",
                   help="'auto', 'auto:<fraction>' or an absolute persistence")
    p.add_argument("--no-global-pair", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topoclust",
        description="Cluster scalar-field ensembles by their persistence diagrams.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline: diagrams, k sweep, AIC/BIC selection")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="ensemble directory or manifest")
    src.add_argument("--synth", help="e.g. gaussians:n=30,patterns=3,grid=64x64,noise=0.05")
    p.add_argument("--family", choices=("minima", "maxima", "both"), default="maxima")
    _add_k_range(p)
    p.add_argument("--tmax", type=_duration, default=10.0, help="budget per k, e.g. 10s, 500ms, none")
    p.add_argument("--total-budget", type=_duration, default=None,
                   help="budget for the whole sweep, split equally over k")
    p.add_argument("--alpha", type=_unit_interval, default=0.0)
    p.add_argument("--pthreshold", type=_threshold, default="auto")
    p.add_argument("--dim", type=_dim, default="auto", help="'auto'/'plane', 'points' or a number")
    p.add_argument("--no-global-pair", action="store_true")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--threads", type=_threads, default=None,
                   help="worker processes; default $TOPOCLUST_THREADS or the CPU count")
    p.add_argument("--output", default="topoclust_out")

    p = sub.add_parser("synth", help="write a synthetic ensemble to a directory")
    p.add_argument("spec", help="generator string, e.g. gaussians:n=30,patterns=3")
    p.add_argument("output")
    p.add_argument("--seed", type=_nonneg_int, default=0)

    p = sub.add_parser("diagram", help="persistence diagram of one .sfield file")
    p.add_argument("field")
    _add_diagram_options(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("distance", help="W2 distance between two .pdiag files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--alpha", type=_unit_interval, default=0.0)

    p = sub.add_parser("barycenter", help="barycenter of the diagrams in a directory")
    p.add_argument("dir")
    p.add_argument("--tmax", type=_duration, default=None)
    p.add_argument("--alpha", type=_unit_interval, default=0.0)
    _add_diagram_options(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("cluster", help="k-means clustering of the diagrams in a directory")
    p.add_argument("dir")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--tmax", type=_duration, default=10.0)
    p.add_argument("--alpha", type=_unit_interval, default=0.0)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    _add_diagram_options(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("select", help="AIC/BIC scores from clustering JSON files or diagrams")
    p.add_argument("dir")
    _add_k_range(p)
    p.add_argument("--dim", type=_dim, default="auto")
    p.add_argument("--tmax", type=_duration, default=10.0)
    p.add_argument("--alpha", type=_unit_interval, default=0.0)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--threads", type=_threads, default=None)
    _add_diagram_options(p)
    p.add_argument("-o", "--output")
    return parser


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_diagrams(directory, args):
    """Diagrams from .pdiag files, or computed from the fields of an ensemble."""
    d = Path(directory)
    if d.is_dir() and any(d.glob("*" + DIAGRAM_SUFFIX)):
        return load_diagram_dir(d)
    if d.is_dir() and not any(d.glob("*" + FIELD_SUFFIX)) and not (d / MANIFEST).exists():
        raise TopoClustError(f"{d}: no {DIAGRAM_SUFFIX} or {FIELD_SUFFIX} files")
    ens = load_ensemble(d)
    return ensemble_diagrams(ens, args.family, args.pthreshold, not args.no_global_pair)


def _cmd_run(args):
    cfg = RunConfig(
        input=args.input,
        synth=args.synth,
        family=args.family,
        k_min=args.kmin,
        k_max=args.kmax,
        t_max=args.tmax,
        total_budget=args.total_budget,
        alpha=args.alpha,
        persistence_threshold=args.pthreshold,
        dim=args.dim,
        include_global_pair=not args.no_global_pair,
        seed=args.seed,
        threads=args.threads,
        output=args.output,
    )
    report = run_pipeline(cfg)
    for family, block in report["families"].items():
        sel = block["selected_k"]
        print(f"{family}: selected k  aic={sel['aic']}  bic={sel['bic']}")
    print(f"report written to {Path(args.output) / 'report.json'}")


def _cmd_synth(args):
    ens = parse_synth(args.spec, args.seed)
    paths = save_ensemble(ens, args.output)
    print(f"wrote {len(paths)} members to {args.output}")


def _cmd_diagram(args):
    field = read_field(args.field)
    d = ensemble_diagrams([field], args.family, args.pthreshold, not args.no_global_pair)[0]
    _emit(format_diagram(d), args.output)


def _cmd_distance(args):
    a, b = load_diagram(args.a), load_diagram(args.b)
    print(repr(wasserstein(a, b, LiftingParams(alpha=args.alpha))))


def _cmd_barycenter(args):
    diagrams = _load_diagrams(args.dir, args)
    res = barycenter(diagrams, LiftingParams(alpha=args.alpha), TimeBudget(args.tmax))
    print(f"energy={res.frechet_energy!r} iterations={res.iterations} "
          f"converged={res.converged}", file=sys.stderr)
    _emit(format_diagram(res.centroid), args.output)


def _cmd_cluster(args):
    diagrams = _load_diagrams(args.dir, args)
    res = cluster(diagrams, args.k, LiftingParams(alpha=args.alpha), TimeBudget(args.tmax), args.seed)
    _emit(dumps(result_to_json(res)), args.output)


def _cmd_select(args):
    d = Path(args.dir)
    jsons = sorted(d.glob("*.json")) if d.is_dir() else []
    if jsons:
        results = [result_from_json(json.loads(p.read_text())) for p in jsons]
        results = [r for r in results if args.kmin <= r.k <= args.kmax]
        diagrams = None
    else:
        diagrams = _load_diagrams(d, args)
        results = sweep(diagrams, args.kmin, args.kmax, LiftingParams(alpha=args.alpha),
                        TimeBudget(args.tmax), args.seed, args.threads)
    if str(args.dim).strip().lower() == "points" and diagrams is None:
        raise TopoClustError("--dim points needs diagrams, not clustering JSON files")
    rep = select_k(results, resolve_dimension(args.dim, diagrams))
    _emit(dumps(score_report_to_json(rep)), args.output)


COMMANDS = {
    "run": _cmd_run,
    "synth": _cmd_synth,
    "diagram": _cmd_diagram,
    "distance": _cmd_distance,
    "barycenter": _cmd_barycenter,
    "cluster": _cmd_cluster,
    "select": _cmd_select,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kmin", 1) > getattr(args, "kmax", 1):
        parser.error(f"--kmin ({args.kmin}) must not exceed --kmax ({args.kmax})")
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args)
    except TopoClustError as e:
        print(f"topoclust: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
