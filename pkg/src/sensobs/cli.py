"""sensobs command line.

    sensobs analyze      --robot R --sensors S --q "..." [--gamma sum|max] [--threshold T]
    sensobs classify     --robot R --sensors S --q "..." [--gamma sum|max]
    sensobs special-case --robot R --q "..."
    sensobs sweep        --scenario SC [--sample-rate HZ] [--out file.csv]
    sensobs presets      [--out DIR]

Robots, sensor suites and scenarios are file paths or bundled preset names.
Exit status: 0 ok, 1 input error, 2 unsupported chain.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import presets
from .errors import ConfigurationError, UnsupportedChainError
from .observability import analyze
from .singularity import classify, special_case_check
from .sweep import emphasize, format_value, sweep, to_csv

AXIS_KEYS = ("fx", "fy", "fz", "tx", "ty", "tz")

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p, robot=True, sensors=True, q=True):
    if robot:
        p.add_argument("--robot", help="robot description file or preset name")
    if sensors:
        p.add_argument("--sensors", help="sensor suite file or preset name")
    if q:
        p.add_argument("--q", help='joint values, comma separated (rad / m), e.g. "0,0.3"')
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sensobs", description="Sensor observability and manipulability analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="observability vector, index, ellipsoid and flags")
    _common(p)
    p.add_argument("--gamma", choices=("sum", "max"), default="sum")
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("classify", help="kinematic / observability / J^T null-space singularity")
    _common(p)
    p.add_argument("--gamma", choices=("sum", "max"), default="sum")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("special-case", help="compare S with the Jacobian for joint torque sensors")
    _common(p, sensors=False)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("sweep", help="index time series along a waypoint trajectory")
    _common(p, q=False)
    p.add_argument("--scenario", help="scenario file or preset name")
    p.add_argument("--sample-rate", type=float, help="override the scenario sample rate (Hz)")
    p.add_argument("--wk-emphasis", type=float, metavar="GAIN",
                   help="add a wk_display column, an exponential stretch of wk_norm near zero")
    p.add_argument("--format", choices=("text", "csv", "json"), default="csv")

    p = sub.add_parser("presets", help="list bundled robots, suites and scenarios; --out writes them")
    p.add_argument("--out", help="directory to write preset files into")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def parse_q(text: str) -> np.ndarray:
    try:
        q = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"--q: expected comma-separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in q):
        raise ConfigurationError("--q: values must be finite")
    return np.array(q)


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigurationError(f"{args.command}: missing required option(s) {', '.join(missing)}")


def _load_config(args, sensors=True):
    chain = presets.resolve_robot(args.robot)
    suite = presets.resolve_sensors(args.sensors) if sensors else None
    q = parse_q(args.q)
    if q.shape[0] != chain.n_q:
        raise ConfigurationError(f"--q: robot {chain.name!r} has {chain.n_q} joints, got {q.shape[0]} values")
    if suite is not None:
        suite.check_chain(chain)
    return chain, suite, q


def _num(v):
    return float(v)


def analyze_report(chain, suite, q, gamma, threshold) -> dict:
    r = analyze(chain, q, suite, gamma, threshold)
    rep = {"robot": chain.name, "sensors": suite.name, "n_s": suite.n_s, "q": [_num(v) for v in q],
           "gamma": r.gamma_kind, "threshold": _num(threshold)}
    for key, v in zip(AXIS_KEYS, r.s):
        rep[f"s_{key}"] = _num(v)
    rep["o"] = _num(r.o)
    rep["ellipsoid_force"] = [_num(v) for v in r.ellipsoid_force]
    rep["ellipsoid_torque"] = [_num(v) for v in r.ellipsoid_torque]
    rep["flags"] = [AXIS_KEYS[j] for j in np.flatnonzero(r.per_axis_flags)]
    return rep


def classify_report(chain, suite, q, gamma) -> dict:
    c = classify(chain, q, suite, gamma)
    return {
        "robot": chain.name, "sensors": suite.name, "q": [_num(v) for v in q], "gamma": c.gamma_kind,
        "w_k": c.w_k, "o_sum": c.o_sum, "o_max": c.o_max,
        "kinematic_singular": c.kinematic_singular,
        "observability_singular": c.observability_singular,
        "jt_nullspace_dim": c.jt_nullspace_dim,
        "false_observability_singularity": c.false_observability_singularity,
    }


def special_case_report(chain, q) -> dict:
    r = special_case_check(chain, q)
    return {
        "robot": chain.name, "q": [_num(v) for v in q],
        "translational_deviation": [None if np.isnan(v) else _num(v) for v in r.translational],
        "rotational_deviation": [None if np.isnan(v) else _num(v) for v in r.rotational],
        "excluded_columns": [i + 1 for i in r.excluded],
        "max_deviation": r.max_deviation,
    }


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, float):
        return format_value(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v) if v else "(none)"
    return str(v)


def render(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rep.keys())
        w.writerow([_fmt(v) if not isinstance(v, list) else ";".join(_fmt(x) for x in v) for v in rep.values()])
        return buf.getvalue()
    width = max(len(k) for k in rep)
    return "".join(f"{k:<{width}}  {_fmt(v)}\n" for k, v in rep.items())


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run_sweep(args) -> str:
    _require(args, "scenario")
    scenario, base = presets.resolve_scenario(args.scenario)
    chain = presets.resolve_robot(args.robot) if args.robot else presets.resolve_robot(scenario.robot, base)
    suite = presets.resolve_sensors(args.sensors) if args.sensors else presets.resolve_sensors(scenario.sensors, base)
    traj = scenario.trajectory
    if args.sample_rate is not None:
        traj = type(traj)(traj.waypoints, args.sample_rate)
    series = sweep(chain, suite, traj)
    extra = {}
    if args.wk_emphasis is not None:
        extra["wk_display"] = emphasize(series.wk_norm, args.wk_emphasis)
    if args.format == "csv":
        return to_csv(series, extra)
    if args.format == "json":
        cols = dict(zip(series.columns(), np.array(list(series.rows())).T.tolist()))
        cols.update({k: v.tolist() for k, v in extra.items()})
        return json.dumps({"scenario": scenario.name, "peaks": series.peaks, "columns": cols}) + "\n"
    rep = {"scenario": scenario.name, "robot": chain.name, "sensors": suite.name, "samples": len(series),
           "sample_rate": traj.sample_rate}
    for name in ("wk", "o_sum", "o_max"):
        rep[f"{name}_peak"] = series.peaks[name]
        rep[f"{name}_min_at"] = series.argmin_time(name)
    return render(rep, "text")


def run_presets(args) -> str:
    listing = {
        "robots": list(presets.ROBOTS),
        "sensors": list(presets.SUITES),
        "scenarios": list(presets.SCENARIOS),
    }
    if args.out:
        written = presets.write_presets(args.out)
        listing["written"] = [str(p) for p in written]
    if args.format == "json":
        return json.dumps(listing, indent=2) + "\n"
    lines = []
    for key, names in listing.items():
        lines.append(f"{key}:")
        lines.extend(f"  {n}" for n in names)
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "presets":
            text = run_presets(args)
            sys.stdout.write(text)
            return EXIT_OK
        if args.command == "sweep":
            text = run_sweep(args)
        elif args.command == "special-case":
            _require(args, "robot", "q")
            chain, _, q = _load_config(args, sensors=False)
            text = render(special_case_report(chain, q), args.format)
        else:
            _require(args, "robot", "sensors", "q")
            chain, suite, q = _load_config(args)
            if args.command == "analyze":
                if not args.threshold >= 0:
                    raise ConfigurationError("--threshold: must be >= 0")
                rep = analyze_report(chain, suite, q, args.gamma, args.threshold)
            else:
                rep = classify_report(chain, suite, q, args.gamma)
            text = render(rep, args.format)
        _emit(text, args.out)
    except BrokenPipeError:
        # reader went away (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK
    except UnsupportedChainError as exc:
        print(f"sensobs: unsupported chain: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ConfigurationError as exc:
        print(f"sensobs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"sensobs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
