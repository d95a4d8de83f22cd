"""Command-line front end.

Exit status: 0 success, 1 a monitor or oracle finding, 2 usage, parse or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .certify import certify_convergence, stability_report
from .configio import ConfigParseError, load_config
from .export import (
    analysis_records,
    certificate_record,
    certificate_text,
    fixture_report_text,
    plot_svg,
    read_trajectory_csv,
    to_json,
    trajectory_csv,
)
from .fixtures import FIXTURE_IDS, check_fixture, fixture
from .model import ConfigError, DegenerateWeightsError, simulate
from .schedules import as_fraction
from .sweep import run_sweep, sweep_record

OK, FINDING, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _source(args):
    """(config, default steps) from --config or --fixture."""
    if args.fixture is not None:
        fx = fixture(args.fixture)
        return fx.config, fx.horizon
    return load_config(args.config), None


def _steps(args, default):
    steps = args.steps if args.steps is not None else default
    if steps is None:
        raise UsageError("--steps is required with --config")
    if steps < 0:
        raise UsageError("--steps must be nonnegative")
    return steps


def _trajectory(args):
    config, default = _source(args)
    return simulate(config, _steps(args, default))


def cmd_simulate(args) -> int:
    traj = _trajectory(args)
    _write(args.out, trajectory_csv(traj, exact=not args.decimal, analysis=args.analysis))
    return OK


def cmd_analyze(args) -> int:
    traj = _trajectory(args)
    _write(args.out, to_json({"horizon": traj.horizon, "steps": analysis_records(traj)}))
    return OK


def cmd_certify(args) -> int:
    traj = _trajectory(args)
    cert = certify_convergence(traj, args.gamma, args.tail, extend_phase1=args.extend_phase1)
    text = to_json(certificate_record(cert)) if args.json else certificate_text(cert)
    _write(args.out, text)
    failed = any(v.findings for v in cert.monitor_verdicts.values())
    return FINDING if failed else OK


def cmd_reproduce(args) -> int:
    fx = fixture(args.fixture)
    report = check_fixture(args.fixture, args.steps)
    _write(args.out, fixture_report_text(fx, report, stability_report(report.trajectory)))
    return OK if report.ok else FINDING


def cmd_sweep(args) -> int:
    if args.count < 0 or args.max_n < 1 or args.steps < 0:
        raise UsageError("--count and --steps must be nonnegative, --max-n positive")
    result = run_sweep(args.seed, args.count, args.max_n, args.steps)
    _write(args.out, to_json(sweep_record(result)))
    return OK if result.ok else FINDING


def cmd_plot(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    try:
        ts, series = read_trajectory_csv(text)
    except ValueError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    h, eps = args.h, args.epsilon
    if args.config is not None:
        config = load_config(args.config)
        h = config.h if h is None else h
        eps = config.epsilon if eps is None else eps
    _write(args.out, plot_svg(ts, series, h, eps, args.title))
    return OK


def _add_source(p, steps_help="number of steps (default: the fixture's own horizon)"):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="YAML system description")
    src.add_argument("--fixture", choices=FIXTURE_IDS, help="built-in worked example")
    p.add_argument("--steps", type=int, help=steps_help)
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="truthseekers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a system and export its trajectory as CSV")
    _add_source(p)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--exact", action="store_true", help="write p/q rationals (default)")
    fmt.add_argument("--decimal", action="store_true", help="write 12 significant digits (lossy)")
    p.add_argument("--analysis", action="store_true", help="append hope-interval columns")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="per-step hope interval and neighbourhood sets as JSON")
    _add_source(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="convergence certificate and monitor verdicts")
    _add_source(p)
    p.add_argument("--gamma", type=_rational, required=True, help="distance threshold, p/q")
    p.add_argument("--tail", type=int, help="steps the last window must last (default 2*ceil(2/(alpha beta)))")
    p.add_argument("--json", action="store_true", help="JSON instead of a text report")
    p.add_argument("--extend-phase1", action="store_true",
                   help="accept the band condition before T1 when the hope interval is monotone")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("reproduce", help="check a built-in example against its exact oracle")
    p.add_argument("--fixture", choices=FIXTURE_IDS, required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="random strict-mode systems through every monitor")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--steps", type=int, default=30)
    p.add_argument("--out", help="findings file (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="SVG of a trajectory CSV")
    p.add_argument("--in", dest="input", required=True, help="trajectory CSV from simulate")
    p.add_argument("--out", help="SVG file (default: stdout)")
    p.add_argument("--config", help="take h and epsilon from this config")
    p.add_argument("--h", type=_rational)
    p.add_argument("--epsilon", type=_rational)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigParseError, ConfigError, OSError, DegenerateWeightsError) as exc:
        print(f"truthseekers {args.command}: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
