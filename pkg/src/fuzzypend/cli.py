"""Command-line interface: ``fuzzypend <subcommand> --help`` for details.

Exit codes: 0 success, 1 domain error (parse, validation, config), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .controllers import resolve_controller
from .core import FuzzyError
from .fis import FisError, format_float, parse_fis, read_fis, serialize_fis
from .plant import PlantState
from .sim import (
    QUANTITIES,
    ConfigMismatch,
    RunReport,
    SimConfig,
    Sine,
    Square,
    Zero,
    Constant,
    compare,
    extract_peaks,
    read_trajectory_csv,
    run_closed_loop,
)

DOMAIN_ERRORS = (FisError, FuzzyError, ConfigMismatch, ValueError, OSError)


def _crisp(v: float) -> str:
    return format_float(round(v, 12))


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_signal_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("disturbance signal and run")
    g.add_argument("--signal", choices=("square", "sine", "zero", "constant"), default="square")
    g.add_argument("--amplitude", type=float, default=0.1, help="N (constant: the value); default 0.1")
    g.add_argument("--period", type=float, default=5.0, help="square period, s; default 5")
    g.add_argument("--frequency", type=float, default=0.2, help="sine frequency, Hz; default 0.2")
    g.add_argument("--phase", type=float, default=0.0, help="square: s, sine: rad")
    g.add_argument("--dt", type=float, default=0.01)
    g.add_argument("--duration", type=float, default=10.0)
    g.add_argument("--method", choices=("rk4", "euler"), default="rk4")
    g.add_argument("--initial", type=_floats, default=[0.0, 0.0, 0.0, 0.0], metavar="X,XDOT,THETA,THETADOT")
    g.add_argument("--force-limit", type=float, default=None, help="clamp controller force to +-N")


def _signal(args):
    if args.signal == "square":
        return Square(args.amplitude, args.period, args.phase)
    if args.signal == "sine":
        return Sine(args.amplitude, args.frequency, args.phase)
    if args.signal == "constant":
        return Constant(args.amplitude)
    return Zero()


def _config(args, controller: str) -> SimConfig:
    if len(args.initial) != 4:
        raise ValueError("--initial needs 4 values: x,x_dot,theta,theta_dot")
    return SimConfig(
        controller=controller,
        signal=_signal(args),
        dt=args.dt,
        duration=args.duration,
        initial=PlantState(*args.initial),
        method=args.method,
        force_limit=args.force_limit,
    )


def _print_peaks(peaks, out) -> None:
    for q in QUANTITIES:
        print(peaks[q].describe(), file=out)


def cmd_infer(args, parser) -> int:
    system = read_fis(args.fis)
    if len(args.inputs) != len(system.inputs):
        parser.error(f"{args.fis} takes {len(system.inputs)} inputs, got {len(args.inputs)}")
    for v in system.infer(args.inputs):
        print(_crisp(v))
    return 0


def cmd_simulate(args, parser) -> int:
    config = _config(args, args.controller)
    traj = run_closed_loop(config)
    if args.out:
        traj.write_csv(args.out)
    _print_peaks(extract_peaks(traj), sys.stdout)
    if traj.first_violation:
        t, names = traj.first_violation
        print(f"limits violated first at t={format_float(t)} s: {', '.join(names)}")
    return 0


def cmd_compare(args, parser) -> int:
    reports = []
    for label in (args.a, args.b):
        traj = run_closed_loop(_config(args, label))
        reports.append(RunReport.from_trajectory(label, traj))
    if reports[0].label == reports[1].label:
        reports[1] = RunReport(f"{args.b}(b)", reports[1].peaks, reports[1].signal, reports[1].dt, reports[1].duration)
    table = compare(*reports)
    sys.stdout.write(table.to_text())
    if args.csv:
        Path(args.csv).write_text(table.to_csv(), encoding="ascii", newline="\n")
    return 0


def cmd_fis_check(args, parser) -> int:
    status = 0
    for path in args.paths:
        try:
            read_fis(path)
            print(f"{path}: OK")
        except FisError as e:
            print(f"{path}: {e}")
            status = 1
    return status


def cmd_fis_fmt(args, parser) -> int:
    status = 0
    for path in args.paths:
        p = Path(path)
        try:
            raw = p.read_bytes()
            text = serialize_fis(parse_fis(raw))
        except FisError as e:
            print(f"{path}: {e}", file=sys.stderr)
            status = 1
            continue
        if raw == text.encode("ascii"):
            print(f"{path}: unchanged")
        elif args.check:
            print(f"{path}: would reformat")
            status = 1
        else:
            p.write_text(text, encoding="ascii", newline="\n")
            print(f"{path}: reformatted")
    return status


def cmd_metrics(args, parser) -> int:
    _print_peaks(extract_peaks(read_trajectory_csv(args.csv)), sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzypend", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="evaluate a FIS file on crisp inputs")
    p.add_argument("--fis", required=True, metavar="PATH")
    p.add_argument("--inputs", required=True, type=_floats, metavar="V1,V2,...")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("simulate", help="closed-loop run; writes CSV, prints peak metrics")
    p.add_argument("--controller", default="mamdani", help="ts, mamdani, PATH.fis or POLE.fis,CART.fis")
    p.add_argument("--out", metavar="PATH", help="trajectory CSV")
    _add_signal_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run two controllers under one experiment and compare peaks")
    p.add_argument("--a", required=True, help="controller spec, as for simulate")
    p.add_argument("--b", required=True, help="controller spec, as for simulate")
    p.add_argument("--csv", metavar="PATH", help="also write the comparison as CSV")
    _add_signal_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fis-check", help="validate FIS files")
    p.add_argument("paths", nargs="+", metavar="PATH")
    p.set_defaults(func=cmd_fis_check)

    p = sub.add_parser("fis-fmt", help="rewrite FIS files in canonical form")
    p.add_argument("paths", nargs="+", metavar="PATH")
    p.add_argument("--check", action="store_true", help="report files that would change, write nothing")
    p.set_defaults(func=cmd_fis_fmt)

    p = sub.add_parser("metrics", help="peak metrics of a trajectory CSV")
    p.add_argument("csv", metavar="PATH")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except DOMAIN_ERRORS as e:
        print(f"fuzzypend {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
