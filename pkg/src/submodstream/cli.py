"""Command-line driver: ``run`` one algorithm, sweep a ``grid``, or ``verify`` against brute force.

Exit status is 0 on success, 1 for invalid flags or configuration and 2 when
the work itself fails (unreadable input, a failed cell, a broken contract).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from .algorithms import ALGORITHMS, PARAMS
from .harness.data import CsvParseError, DimensionInconsistencyError, drift_stream, iid_mixture
from .harness.experiment import AlgorithmSpec, ConfigurationError, ExperimentSpec, run_experiment
from .harness.report import render
from .harness.verify import run_suite
from .thresholds import RuleOfThreeConfig

PARALLEL_ENV = "SUBMODSTREAM_PARALLEL"

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env_parallel() -> int:
    raw = os.environ.get(PARALLEL_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{PARALLEL_ENV} must be an integer, got {raw!r}") from None


def _add_common(p: argparse.ArgumentParser, multi: bool):
    many = "+" if multi else None
    data = p.add_argument_group("data")
    data.add_argument("--input", help="CSV file of numeric rows")
    data.add_argument("--delimiter", default=",", help="CSV delimiter (default ',')")
    data.add_argument("--synthetic", choices=("iid", "drift"), help="generate a Gaussian mixture stream instead")
    data.add_argument("--n", type=int, default=10_000, help="synthetic stream length")
    data.add_argument("--d", type=int, default=5, help="synthetic dimension")
    data.add_argument("--change-points", type=int, default=5, help="change points of a drift stream")
    obj = p.add_argument_group("objective")
    obj.add_argument("--a", type=float, default=1.0, help="log-det scale a (default 1)")
    obj.add_argument("--length-scale", type=float,
                     help="RBF length scale (default 1/(2 sqrt d) in batch, 1/sqrt d in stream)")
    alg = p.add_argument_group("algorithm")
    alg.add_argument("--algorithm", nargs=many, required=False, choices=ALGORITHMS,
                     help="algorithm name" + ("s" if multi else ""))
    alg.add_argument("--k", type=int, nargs=many, default=[20] if multi else 20, help="summary size K")
    alg.add_argument("--epsilon", type=float, nargs=many, help="threshold grid spacing")
    alg.add_argument("--T", type=int, nargs=many, help="ThreeSieves rejection budget")
    alg.add_argument("--alpha", type=float, help="Rule of Three confidence (with --tau, instead of --T)")
    alg.add_argument("--tau", type=float, help="Rule of Three margin (with --alpha, instead of --T)")
    alg.add_argument("--nu", type=float, nargs=many, help="StreamGreedy minimum swap improvement")
    alg.add_argument("--c", type=int, nargs=many, help="Preemption factor / QuickStream buffer size")
    alg.add_argument("--m-policy", default=None,
                     help="'known', 'estimate' or a number (default: known when analytic)")
    alg.add_argument("--length-hint", type=int, help="stream length for the Salsa sparse rule")
    alg.add_argument("--max-passes", type=int, help="batch protocol pass cap (default K)")
    run = p.add_argument_group("execution")
    run.add_argument("--protocol", choices=("batch", "stream"), default="batch",
                     help="batch re-reads the data until K items are chosen; stream reads it once")
    run.add_argument("--seed", type=int, default=0, help="base seed for data and randomized algorithms")
    run.add_argument("--repetitions", type=int, default=1, help="seeds seed, seed+1, ...")
    run.add_argument("--parallel", type=int, default=None, help=f"worker processes (default ${PARALLEL_ENV} or 1)")
    out = p.add_argument_group("output")
    out.add_argument("--output", help="write the report here")
    out.add_argument("--format", choices=("csv", "json"), default="csv", help="report format")
    out.add_argument("--timing", action="store_true", help="include wall time (makes output non-reproducible)")
    p.add_argument("--config", help="flat key = value file; flags given on the command line win")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="submodstream", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_common(sub.add_parser("run", help="run one algorithm and print its summary"), multi=False)
    _add_common(sub.add_parser("grid", help="run an experiment grid and write a report"), multi=True)
    v = sub.add_parser("verify", help="check approximation contracts against brute force")
    v.add_argument("--seed", type=int, default=0, help="first instance seed")
    v.add_argument("--instances", type=int, default=50, help="instances per objective")
    v.add_argument("--epsilon", type=float, default=0.01, help="slack in the approximation bounds")
    v.add_argument("--no-statistical", action="store_true", help="skip the ThreeSieves probability check")
    return parser


def read_config(path) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, sub: argparse.ArgumentParser, argv: Sequence[str]):
    """Parse ``argv`` with defaults taken from ``--config`` when present."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in read_config(args.config).items():
        if key in ("config", "help") or key not in actions:
            raise UsageError(f"{args.config}: unknown key {key!r}")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            conv = action.type or str
            parts = raw.replace(",", " ").split()
            try:
                values = [conv(x) for x in parts]
            except ValueError:
                raise UsageError(f"{args.config}: bad value for {key}: {raw!r}") from None
            if action.choices is not None and any(v not in action.choices for v in values):
                raise UsageError(f"{args.config}: {key} must be one of {list(action.choices)}")
            value = values if action.nargs == "+" else (values[0] if values else None)
        defaults[key] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _listify(v) -> Optional[List]:
    if v is None:
        return None
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _m_policy(raw):
    if raw is None or raw in ("known", "estimate"):
        return raw
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"--m-policy must be 'known', 'estimate' or a number, got {raw!r}") from None


def spec_from_args(args) -> ExperimentSpec:
    """Validate flags and turn them into an experiment spec."""
    names = _listify(args.algorithm)
    if not names:
        raise UsageError("--algorithm is required")
    if (args.input is None) == (args.synthetic is None):
        raise UsageError("give exactly one of --input and --synthetic")
    if args.T is not None and (args.alpha is not None or args.tau is not None):
        raise UsageError("--T and --alpha/--tau are mutually exclusive")
    if (args.alpha is None) != (args.tau is None):
        raise UsageError("--alpha and --tau must be given together")
    if args.parallel is not None and args.parallel < 1:
        raise UsageError("--parallel must be at least 1")
    if args.synthetic == "iid":
        source = iid_mixture(args.n, args.d, seed=args.seed)
    elif args.synthetic == "drift":
        source = drift_stream(args.n, args.d, n_change_points=args.change_points, seed=args.seed)
    else:
        source = args.input
    T = _listify(args.T)
    if args.alpha is not None:
        try:
            T = [RuleOfThreeConfig(alpha=args.alpha, tau=args.tau)]
            T[0].resolve()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    params = {
        "epsilon": _listify(args.epsilon),
        "T": T,
        "nu": _listify(args.nu),
        "c": _listify(args.c),
        "m_policy": _m_policy(args.m_policy),
        "length_hint": args.length_hint,
    }
    params = {k: v for k, v in params.items() if v is not None}
    if "stream-greedy" in names and "nu" not in params:
        raise UsageError("stream-greedy needs --nu")
    return ExperimentSpec(
        source=source,
        algorithms=[AlgorithmSpec(n, {k: v for k, v in params.items() if k in PARAMS.get(n, ())}) for n in names],
        K=_listify(args.k),
        protocol=args.protocol,
        repetitions=args.repetitions,
        seed=args.seed,
        a=args.a,
        length_scale=args.length_scale,
        delimiter=args.delimiter,
        max_passes=args.max_passes,
    )


def _summary_line(r) -> str:
    rel = "" if r.relative_performance is None else f" rel={r.relative_performance:.4f}"
    return (f"{r.algorithm} K={r.K} seed={r.seed} f={r.fvalue:.6f}{rel} |S|={len(r.summary)} "
            f"queries={r.counters.oracle_queries} candidates={r.counters.peak_candidates} "
            f"elements={r.counters.peak_elements} passes={r.counters.passes}")


def _execute(args, keep_reference: bool) -> int:
    spec = spec_from_args(args)
    try:
        spec.validate()
    except ConfigurationError as exc:
        raise UsageError(str(exc)) from None
    parallel = args.parallel if args.parallel is not None else _env_parallel()
    result = run_experiment(spec, parallel=parallel)
    reports = list(result)
    if not keep_reference and "greedy" not in _listify(args.algorithm):
        reports = [r for r in reports if r.algorithm != "greedy"]
    for r in reports:
        print(_summary_line(r))
    for f in result.failures:
        print(f"FAILED {f['algorithm']} K={f['K']} seed={f['seed']} {f['params']}: {f['error']}", file=sys.stderr)
    if args.output and reports:
        text = render(reports, args.format, include_timing=args.timing)
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_RUNTIME if result.failures else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        args = _apply_config(parser, sub, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        if args.command == "verify":
            ok = run_suite(seed=args.seed, n_instances=args.instances, epsilon=args.epsilon,
                           statistical=not args.no_statistical)
            return EXIT_OK if ok else EXIT_RUNTIME
        return _execute(args, keep_reference=args.command == "grid")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, CsvParseError, DimensionInconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
