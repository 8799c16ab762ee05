"""Command-line front end: ``predict``, ``sample``, ``solve`` and ``experiment``.

Data goes to stdout (one document per invocation), diagnostics to stderr.
Exit status: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .analytics import predicted_interval
from .errors import DomainError
from .experiments import ExperimentConfig, _plain, run_experiment
from .graph import GnpParams, read_edge_list, sample_gnp, write_edge_list
from .solver import domination_number_exact

log = logging.getLogger("domlab")

THREADS_ENV = "DOMLAB_THREADS"


def _dump(obj):
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def _positive_float(text):
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="domlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="two-point prediction for D(G(n,p))")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("sample", help="draw G(n,p) and print it as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, help="write here instead of stdout")

    p = sub.add_parser("solve", help="domination number of an edge-list graph")
    p.add_argument("--input", required=True, help="edge-list file, or - for stdin")
    p.add_argument("--budget", type=_positive_float, default=10.0, help="seconds (default 10)")
    p.add_argument("--cap", type=int, help="decide D(G) <= CAP instead of minimising")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("experiment", help="run an experiment described by a JSON config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--threads", type=int, help=f"worker processes (default 1, or ${THREADS_ENV})")
    p.add_argument("--out-dir", type=Path, help="also write <kind>_report.json and <kind>_trials.csv here")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _threads(flag):
    if flag is not None:
        return flag
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _predict(args, out):
    pred = predicted_interval(args.n, args.p)
    if args.format == "text":
        lo, hi = pred.interval
        out.write(f"n={pred.n} p={pred.p:g} regime={pred.regime} r_hat={pred.r_hat} interval={lo},{hi}\n")
    else:
        out.write(_dump(pred.to_dict()))


def _sample(args, out):
    g = sample_gnp(GnpParams(args.n, args.p), args.seed)
    text = write_edge_list(g)
    if args.out is not None:
        args.out.write_text(text)
        log.info("wrote %s (%d edges)", args.out, g.edge_count)
    else:
        out.write(text)


def _solve(args, out):
    if args.input == "-":
        g = read_edge_list(sys.stdin)
    else:
        with open(args.input) as fh:
            g = read_edge_list(fh)
    res = domination_number_exact(g, time_budget=args.budget, size_cap=args.cap)
    if args.format == "text":
        out.write(f"{res.status} {res.size} {' '.join(map(str, res.witness.indices()))}\n")
    else:
        doc = {"n": g.n, "edge_count": g.edge_count}
        doc.update(res.to_dict())
        out.write(_dump(doc))


def _experiment(args, out):
    try:
        data = json.loads(args.config.read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DomainError("config must be a JSON object")
    cfg = ExperimentConfig.from_dict(data)
    threads = _threads(args.threads)
    if threads < 1:
        raise DomainError(f"thread count must be positive, got {threads}")
    log.info("running %s experiment: n=%s p=%s trials=%s threads=%s", cfg.kind, cfg.n, cfg.p, cfg.trials, threads)
    report = run_experiment(cfg, threads=threads)
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        (args.out_dir / f"{cfg.kind}_report.json").write_text(report.to_json())
        (args.out_dir / f"{cfg.kind}_trials.csv").write_text(report.to_csv())
        log.info("wrote reports to %s", args.out_dir)
    out.write(report.to_csv() if args.format == "csv" else report.to_json())


COMMANDS = {"predict": _predict, "sample": _sample, "solve": _solve, "experiment": _experiment}


def main(argv=None, out=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    out = sys.stdout if out is None else out
    try:
        COMMANDS[args.command](args, out)
    except (DomainError, OSError) as exc:
        print(f"domlab {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0
