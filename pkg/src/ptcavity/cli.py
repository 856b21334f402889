"""Command-line front end: sweeps, figure presets and self-verification.

Every sweep writes a CSV table preceded by a ``# params:`` comment echoing the
inputs and a ``#``-prefixed header naming the columns. Floats carry 17
significant digits, and rows come out in grid order whatever ``--threads``
is set to.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from .dynamics import SystemParams
from .moments import propagate
from .states import Coherent, format_state, initial_moments, parse_angle, parse_state
from .witnesses import (
    antibunching_witness,
    difference_squeezing,
    photon_numbers,
    sum_squeezing,
    zeno_from_numbers,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

# name -> panel -> argument list; panel "a" is the default
FIGURES: dict[str, dict[str, list[str]]] = {
    "fig2": {
        panel: ["evolve", "--g", "1", "--gamma", gamma, "--state", state,
                "--t-max", "4", "--steps", "400"]
        for panel, gamma, state in [
            ("a", "0.5", "vacuum"),
            ("b", "1.1", "vacuum"),
            ("c", "0.5", "coherent:1,pi/4,1,pi/4"),
            ("d", "1.1", "coherent:1,pi/4,1,pi/4"),
            ("e", "0.5", "noon:1"),
            ("f", "1.1", "noon:1"),
            ("g", "0.5", "thermal:1"),
            ("h", "1.1", "thermal:1"),
        ]
    },
    "fig4": {
        panel: ["zeno", "--sweep", "gamma", "--g", "1", "--gamma-range", "0.1:2:21",
                "--state", state, "--t-max", "3", "--steps", "30"]
        for panel, state in [("a", "vacuum"), ("b", "noon:1"), ("c", "thermal:1")]
    },
    "fig5": {
        "a": ["zeno", "--sweep", "gamma", "--g", "1", "--gamma-range", "0.1:2:21",
              "--state", "coherent:1,pi,1,-pi/4", "--t-max", "3", "--steps", "30"],
        "b": ["zeno", "--sweep", "dtheta", "--g", "1", "--gamma", "0.5",
              "--state", "coherent:1,0,1,0", "--dtheta-steps", "720",
              "--t-max", "2", "--steps", "4"],
        "b-ptsb": ["zeno", "--sweep", "dtheta", "--g", "1", "--gamma", "1.5",
                   "--state", "coherent:1,0,1,0", "--dtheta-steps", "720",
                   "--t-max", "2", "--steps", "4"],
    },
    "fig6": {
        panel: ["antibunch", "--g", "1", "--gamma-range", "0.1:2:20", "--state", state,
                "--t-max", "4", "--steps", "80"]
        for panel, state in [("a", "coherent:1,pi/2,2,pi/2"), ("b", "noon:1")]
    },
    "fig7": {
        "a": ["squeeze", "--gamma", "1", "--ratios", "0.5,2", "--state", "vacuum",
              "--t-max", "4", "--steps", "400", "--phi", "pi/4"],
    },
}


class UsageError(Exception):
    pass


# --- argument types ---------------------------------------------------------

def _state_arg(text: str):
    try:
        return parse_state(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _angle_arg(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range_arg(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        lo_f, hi_f, n_i = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:N, got {text!r}") from None
    if n_i < 1 or (n_i == 1 and lo_f != hi_f):
        raise argparse.ArgumentTypeError(f"range {text!r} needs N >= 2 unless MIN == MAX")
    return lo_f, hi_f, n_i


def _ratios_arg(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("ratios must be non-negative")
    return values


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


# --- parser -----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--g", type=float, default=1.0, help="coupling strength (default 1)")
    p.add_argument("--gamma", type=float, default=0.5, help="gain/loss rate (default 0.5)")
    p.add_argument("--state", type=_state_arg, default=parse_state("vacuum"),
                   help="vacuum | coherent:r1,theta1,r2,theta2 | noon:n | thermal:beta")
    p.add_argument("--t-max", type=float, default=4.0, help="final time (default 4)")
    p.add_argument("--steps", type=_nonneg_int, default=400, help="time intervals (default 400)")
    p.add_argument("--phi", type=_angle_arg, default=math.pi / 4,
                   help="quadrature phase in radians, pi fractions allowed (default pi/4)")
    _output_opts(p)
    return p


def _output_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--threads", type=_pos_int, default=1, help="worker threads")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")


def build_parser(config: dict[str, str] | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptcavity",
        description="Moment dynamics and nonclassicality witnesses of a PT-symmetric cavity pair.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("evolve", parents=[common], help="photon numbers n1, n2 over time")
    p.set_defaults(func=run_evolve)

    p = sub.add_parser("zeno", parents=[common], help="Zeno parameters")
    p.add_argument("--sweep", choices=("t", "gamma", "dtheta"), default="t")
    p.add_argument("--gamma-range", type=_range_arg, default=(0.1, 2.0, 21),
                   help="MIN:MAX:N grid for --sweep gamma")
    p.add_argument("--dtheta-steps", type=_pos_int, default=720,
                   help="points on [0, 2pi) for --sweep dtheta")
    p.set_defaults(func=run_zeno)

    p = sub.add_parser("antibunch", parents=[common], help="intermodal antibunching witness")
    p.add_argument("--gamma-range", type=_range_arg, default=None,
                   help="optional MIN:MAX:N grid over gamma")
    p.set_defaults(func=run_antibunch)

    p = sub.add_parser("squeeze", parents=[common], help="sum and difference squeezing")
    p.add_argument("--ratios", type=_ratios_arg, default=None,
                   help="comma-separated g/gamma values at fixed --gamma")
    p.set_defaults(func=run_squeeze)

    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("name", choices=sorted(FIGURES))
    p.add_argument("panel", nargs="?", default="a")
    p.add_argument("--show", action="store_true", help="print the expanded command and exit")
    _output_opts(p)
    p.set_defaults(func=run_figure)

    p = sub.add_parser("verify", help="oracle agreement and invariant checks")
    p.add_argument("--strict", action="store_true", help="tighten tolerances one decade")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--config", help=argparse.SUPPRESS)
    p.set_defaults(func=run_verify)

    if config:
        _apply_config(parser, sub, config)
    return parser


def _apply_config(parser, sub, config: dict[str, str]) -> None:
    used = set()
    for name, subparser in sub.choices.items():
        dests = {a.dest for a in subparser._actions}
        known = {k: v for k, v in config.items() if k in dests}
        subparser.set_defaults(**known)
        used.update(known)
    unknown = sorted(set(config) - used)
    if unknown:
        parser.error(f"unknown config key(s): {', '.join(unknown)}")


def read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


# --- output -----------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, str):
        return value
    x = float(value)
    return None if math.isnan(x) else x


def render(columns: Sequence[str], rows: Iterable[Sequence], params: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "params": params,
            "columns": list(columns),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    lines = ["# params: " + " ".join(f"{k}={v}" for k, v in params.items())]
    lines.append("# " + ",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _echo(args, *keys: str) -> dict:
    out = {}
    for key in keys:
        value = getattr(args, key)
        if key == "state":
            value = format_state(value)
        elif key == "gamma_range" and value is not None:
            value = "{!r}:{!r}:{}".format(*value)
        elif key == "ratios" and value is not None:
            value = ",".join(repr(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        out[key] = "none" if value is None else str(value)
    return out


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def time_grid(t_max: float, steps: int) -> list[float]:
    if t_max < 0:
        raise UsageError("--t-max must be non-negative")
    if steps == 0:
        if t_max != 0:
            raise UsageError("--steps 0 is only meaningful with --t-max 0")
        return [0.0]
    return [t_max * k / steps for k in range(steps + 1)]


def _params(g: float, gamma: float) -> SystemParams:
    try:
        return SystemParams(g=g, gamma=gamma)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _range_values(spec: tuple[float, float, int]) -> list[float]:
    lo, hi, n = spec
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


# --- subcommands ------------------------------------------------------------

def run_evolve(args) -> int:
    params = _params(args.g, args.gamma)
    m0 = initial_moments(args.state)
    times = time_grid(args.t_max, args.steps)

    def row(t):
        n1, n2 = photon_numbers(propagate(params, m0, t))
        return (t, params.g * t, n1, n2)

    rows = _pmap(row, times, args.threads)
    meta = _echo(args, "g", "gamma", "state", "t_max", "steps")
    _write(render(("t", "gt", "n1", "n2"), rows, meta, args.format), args.output)
    return EXIT_OK


def _zeno_row(params: SystemParams, m0, t: float):
    coupled = photon_numbers(propagate(params, m0, t))
    free = photon_numbers(propagate(params.with_coupling(0.0), m0, t))
    z = zeno_from_numbers(coupled, free)
    return z.zeta1, z.zeta2, z.defined


def run_zeno(args) -> int:
    times = time_grid(args.t_max, args.steps)
    if args.sweep == "t":
        params = _params(args.g, args.gamma)
        m0 = initial_moments(args.state)
        columns = ("t", "zeta1", "zeta2", "defined")
        rows = _pmap(lambda t: (t, *_zeno_row(params, m0, t)), times, args.threads)
        meta = _echo(args, "sweep", "g", "gamma", "state", "t_max", "steps")
    elif args.sweep == "gamma":
        m0 = initial_moments(args.state)
        grid = [(gm, t) for gm in _range_values(args.gamma_range) for t in times]
        for gm in _range_values(args.gamma_range):
            _params(args.g, gm)
        columns = ("gamma", "t", "zeta1", "zeta2", "defined")
        rows = _pmap(lambda p: (p[0], p[1], *_zeno_row(SystemParams(args.g, p[0]), m0, p[1])),
                     grid, args.threads)
        meta = _echo(args, "sweep", "g", "gamma_range", "state", "t_max", "steps")
    else:
        if not isinstance(args.state, Coherent):
            raise UsageError("--sweep dtheta needs a coherent --state")
        params = _params(args.g, args.gamma)
        base = args.state
        n = args.dtheta_steps
        dthetas = [2.0 * math.pi * k / n for k in range(n)]
        grid = [(d, t) for d in dthetas for t in times]

        def row(p):
            d, t = p
            # relative phase carried by mode 1; mode 2 held at theta2 = 0
            m0 = initial_moments(Coherent(base.r1, d, base.r2, 0.0))
            return (d, t, *_zeno_row(params, m0, t))

        columns = ("dtheta", "t", "zeta1", "zeta2", "defined")
        rows = _pmap(row, grid, args.threads)
        meta = _echo(args, "sweep", "g", "gamma", "state", "dtheta_steps", "t_max", "steps")
    _write(render(columns, rows, meta, args.format), args.output)
    return EXIT_OK


def run_antibunch(args) -> int:
    if args.g <= 0:
        raise UsageError("antibunch reports gamma/g and needs --g > 0")
    times = time_grid(args.t_max, args.steps)
    gammas = _range_values(args.gamma_range) if args.gamma_range else [args.gamma]
    for gm in gammas:
        _params(args.g, gm)
    m0 = initial_moments(args.state)
    grid = [(gm, t) for gm in gammas for t in times]

    def row(p):
        gm, t = p
        moments = propagate(SystemParams(args.g, gm), m0, t)
        return (t, gm / args.g, antibunching_witness(moments))

    rows = _pmap(row, grid, args.threads)
    keys = ("g", "gamma_range" if args.gamma_range else "gamma", "state", "t_max", "steps")
    _write(render(("t", "gamma_over_g", "A"), rows, _echo(args, *keys), args.format), args.output)
    return EXIT_OK


def run_squeeze(args) -> int:
    if args.gamma <= 0:
        raise UsageError("squeeze reports gamma*t and g/gamma and needs --gamma > 0")
    times = time_grid(args.t_max, args.steps)
    ratios = args.ratios if args.ratios is not None else [args.g / args.gamma]
    m0 = initial_moments(args.state)
    grid = [(r, t) for r in ratios for t in times]

    def row(p):
        r, t = p
        g = args.g if args.ratios is None else r * args.gamma
        moments = propagate(SystemParams(g, args.gamma), m0, t)
        return (args.gamma * t, r, sum_squeezing(moments, args.phi),
                difference_squeezing(moments, args.phi))

    rows = _pmap(row, grid, args.threads)
    keys = ("gamma", "ratios" if args.ratios is not None else "g", "state", "phi",
            "t_max", "steps")
    _write(render(("gamma_t", "g_over_gamma", "V", "W"), rows, _echo(args, *keys), args.format),
           args.output)
    return EXIT_OK


def expand_figure(name: str, panel: str) -> list[str]:
    panels = FIGURES[name]
    if panel not in panels:
        raise UsageError(f"{name} has panels {', '.join(sorted(panels))}; got {panel!r}")
    return list(panels[panel])


def run_figure(args) -> int:
    argv = expand_figure(args.name, args.panel)
    argv += ["--format", args.format, "--output", args.output, "--threads", str(args.threads)]
    if args.show:
        print("ptcavity " + " ".join(argv))
        return EXIT_OK
    return main(argv)


def run_verify(args) -> int:
    from .verify import run_checks

    results = run_checks(strict=args.strict)
    ok = all(r.passed for r in results)
    if args.json:
        doc = {"passed": ok, "strict": args.strict, "checks": [r.as_dict() for r in results]}
        print(json.dumps(doc, indent=1))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            note = "  (exempt from --strict)" if r.exempt else ""
            print(f"{status}  {r.name:<28} value={r.error:.3e}  tol={r.tolerance:.1e}"
                  f"  {r.seconds:6.2f}s{note}")
        print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        config = read_config(known.config) if known.config else None
    except (OSError, UsageError) as exc:
        print(f"ptcavity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = build_parser(config).parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"ptcavity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
