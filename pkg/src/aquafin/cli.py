"""Command-line front end: ``simulate``, ``sweep``, ``preset``, ``reduce``.

Exit status: 0 success, 2 configuration error, 3 I/O error,
4 integration aborted, 5 run(s) unterminated.
"""

import argparse
import logging
from pathlib import Path
import sys

from .config import ConfigError, load_scenario, read_document
from .experiments import PRESETS, SweepSpec, range_values, reduce_coeffs, run_preset, run_sweep
from .output import summary_line, write_trajectory
from .simulator import SimulationError, simulate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ABORT = 4
EXIT_UNTERMINATED = 5

log = logging.getLogger("aquafin")


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _out_dir(path):
    p = Path(path)
    try:
        p.mkdir(parents=True, exist_ok=True)
        probe = p / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"output directory {p} is not writable: {exc.strerror}") from exc
    return p


def _say(args, text):
    if not args.quiet:
        print(text)


def cmd_simulate(args):
    try:
        scenario, every = load_scenario(args.config)
    except ConfigError as exc:
        raise _Fail(EXIT_IO if exc.io else EXIT_CONFIG, str(exc)) from exc
    out = _out_dir(args.out)
    try:
        traj = simulate(scenario, every)
    except SimulationError as exc:
        raise _Fail(EXIT_ABORT, f"integration aborted: {exc}") from exc
    try:
        write_trajectory(traj, out, "trajectory", args.format)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write output: {exc}") from exc
    print(summary_line(traj.summary, scenario.name or None))
    return EXIT_OK if traj.status == "terminated" else EXIT_UNTERMINATED


def _values(args):
    if args.values is not None:
        out = []
        for tok in args.values.split(","):
            tok = tok.strip()
            low = tok.lower()
            if low in ("true", "on"):
                out.append(True)
            elif low in ("false", "off"):
                out.append(False)
            else:
                try:
                    out.append(float(tok))
                except ValueError as exc:
                    raise _Fail(EXIT_CONFIG, f"--values: not a number: {tok!r}") from exc
        return out
    try:
        start, stop, step = (float(x) for x in args.range.split(":"))
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, "--range must be START:STOP:STEP") from exc
    try:
        return range_values(start, stop, step)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, f"--range: {exc}") from exc


def _sweep_status(results):
    statuses = [r.status for res in results for r in res.rows]
    if "config" in statuses:
        return EXIT_CONFIG
    if "aborted" in statuses:
        return EXIT_ABORT
    if "unterminated" in statuses:
        return EXIT_UNTERMINATED
    return EXIT_OK


def cmd_sweep(args):
    try:
        doc = read_document(args.config)
        spec = SweepSpec(doc, args.param, _values(args), name=args.param,
                         base_dir=Path(args.config).parent, source=str(args.config))
    except ConfigError as exc:
        raise _Fail(EXIT_IO if exc.io else EXIT_CONFIG, str(exc)) from exc
    out = _out_dir(args.out)
    res = run_sweep(spec, out, args.jobs, args.format)
    for row in res.rows:
        if row.summary is not None:
            _say(args, summary_line(row.summary, f"{args.param}={row.value}"))
        else:
            _say(args, f"{args.param}={row.value}: {row.status}: {row.error}")
    return _sweep_status([res])


def cmd_preset(args):
    out = _out_dir(args.out)
    try:
        res = run_preset(args.name, out, args.jobs, args.format)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from exc
    for label, sw in res.sweeps.items():
        for row in sw.rows:
            if row.summary is not None:
                _say(args, summary_line(row.summary, f"{label} {row.value}"))
    for line in res.lines:
        print(line)
    return _sweep_status(res.sweeps.values())


def cmd_reduce(args):
    out = Path(args.out)
    if out.is_dir() or args.out.endswith(("/", "\\")):
        out = _out_dir(out) / "coefficients.csv"
    try:
        rows = reduce_coeffs(args.input, out, args.area, args.speed, args.rho, args.chord)
    except FileNotFoundError as exc:
        raise _Fail(EXIT_IO, f"cannot read {args.input}") from exc
    except PermissionError as exc:
        raise _Fail(EXIT_IO, f"cannot write {out}") from exc
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from exc
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from exc
    _say(args, f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="aquafin",
                                description="Water-exit and gliding simulation of a winged aquatic robot.")
    p.add_argument("--quiet", action="store_true", help="only print final summaries")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        if config_required:
            sp.add_argument("--config", required=True, help="scenario JSON document")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    s = sub.add_parser("simulate", help="run one scenario")
    common(s)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="run a scenario over one parameter axis")
    common(s)
    s.add_argument("--param", required=True, help="dotted path, e.g. initial.discharge_angle_deg")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--values", help="comma-separated values")
    g.add_argument("--range", help="START:STOP:STEP (inclusive)")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("preset", help="run a shipped study")
    s.add_argument("name", choices=PRESETS)
    common(s, config_required=False)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_preset)

    s = sub.add_parser("reduce", help="wind-tunnel forces to coefficient table")
    s.add_argument("--input", required=True, help="CSV with alpha_deg,Fz,Fx[,M]")
    s.add_argument("--out", required=True, help="output CSV path (or directory)")
    s.add_argument("--area", type=float, required=True, help="reference area [m^2]")
    s.add_argument("--speed", type=float, required=True, help="tunnel speed [m/s]")
    s.add_argument("--rho", type=float, default=1.225)
    s.add_argument("--chord", type=float, default=1.0, help="reference length for CM")
    s.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_reduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
