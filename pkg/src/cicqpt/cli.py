"""``cic`` command line: single states, model scans and property suites.

Exit codes: 0 success, 1 failed property suite, 2 invalid input, 3 numerical failure.
"""
import argparse
import json
import sys

from .cic import OptimizerOptions, cic_backward, cic_forward
from .config import Model, ScanConfig, read_config_file, run_scan
from .errors import IntegrationError, OptimizerError
from .kitaev import parse_line
from .props import SUITES, run_suites
from .scan import emit_csv, emit_svg
from .stateio import load_state

EXIT_OK, EXIT_PROPS_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3

# built-in defaults, applied after the config file
DEFAULTS = {
    "state": {"side": "forward", "starts": 64, "seed": 0, "max_iters": 500},
    "xxz": {"min": -2.0, "max": 3.0, "step": 0.01, "side": "left"},
    "kitaev": {"line": "jx=jy=(1-jz)/2", "min": 0.0, "max": 1.0, "step": 0.002, "link": "z", "tol": 1e-6},
    "props": {"suite": "all", "seed": 0, "states": 200},
}
COMMON_DEFAULTS = {"threads": 1}


class UsageError(ValueError):
    pass


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key=value file with defaults for any long flag")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="SVG plot of the susceptibility")
    p.add_argument("--json", help="also write the JSON summary to this path")
    p.add_argument("--threads", type=int, help="worker processes for scan points (default 1)")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="cic", description="Correlation-induced coherence and phase-transition scans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", parents=[common], help="CIC of a two-party state read from JSON")
    p.add_argument("--in", dest="in_path", help="state file {dim, re, im}")
    p.add_argument("--side", choices=["forward", "backward"])
    p.add_argument("--starts", type=int, help="random optimizer starts (default 64)")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iters", type=int)

    p = sub.add_parser("xxz", parents=[common], help="scan the XXZ chain anisotropy")
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--side", choices=["left", "right"], help="one-sided derivative at Delta = +-1")

    p = sub.add_parser("kitaev", parents=[common], help="scan a line of the Kitaev coupling triangle")
    p.add_argument("--line", help="'jx=jy=(1-jz)/2' or 'ratio=R' (Jx = R (1 - Jz))")
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--link", choices=["x", "y", "z"])
    p.add_argument("--tol", type=float, help="absolute quadrature tolerance of each correlator")

    p = sub.add_parser("props", parents=[common], help="run the seeded property suites")
    p.add_argument("--suite", help=f"comma-separated names from {', '.join(SUITES)}, or 'all'")
    p.add_argument("--seed", type=int)
    p.add_argument("--states", type=int, help="random states per suite (default 200)")
    return parser


def _settings(args):
    """Command line over config file over built-in defaults."""
    merged = dict(COMMON_DEFAULTS)
    merged.update(DEFAULTS[args.command])
    if args.config:
        try:
            fromfile = read_config_file(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if "in" in fromfile:
            fromfile["in_path"] = fromfile.pop("in")
        known = set(vars(args)) - {"command", "config"}
        unknown = sorted(set(fromfile) - known)
        if unknown:
            raise UsageError(f"unknown config key(s) for '{args.command}': {', '.join(unknown)}")
        merged.update(fromfile)
    merged.update({k: v for k, v in vars(args).items() if v is not None})
    return merged


def _convert(s, key, kind):
    try:
        return kind(s[key])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid value for {key}: {s.get(key)!r}") from exc


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True)
    print(text)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_state(s):
    if not s.get("in_path"):
        raise UsageError("state needs --in PATH")
    rho = load_state(s["in_path"])
    opts = OptimizerOptions(
        n_starts=_convert(s, "starts", int), max_iters=_convert(s, "max_iters", int), seed=_convert(s, "seed", int)
    )
    if s["side"] not in ("forward", "backward"):
        raise UsageError("side must be forward or backward")
    res = (cic_forward if s["side"] == "forward" else cic_backward)(rho, opts)
    _write_json({"value": res.value, "argmax_m": res.argmax_m.tolist(), "diagnostics": res.diagnostics}, s.get("json"))
    return EXIT_OK


def _scan_config(s, model):
    kwargs = dict(
        model=model,
        min=_convert(s, "min", float),
        max=_convert(s, "max", float),
        step=_convert(s, "step", float),
        csv_path=s.get("out"),
        svg_path=s.get("svg"),
        json_path=s.get("json"),
        threads=_convert(s, "threads", int),
    )
    if model is Model.XXZ:
        kwargs["side"] = s["side"]
    else:
        kwargs.update(link=s["link"], quad_tol=_convert(s, "tol", float), ratio=parse_line(s["line"]))
    return ScanConfig(**kwargs)


def cmd_scan(s, model):
    config = _scan_config(s, model)
    result = run_scan(config)
    if config.csv_path:
        emit_csv(result, config.csv_path)
    if config.svg_path:
        emit_svg(result, config.svg_path, title=f"{model.value} CIC susceptibility")
    summary = {
        "model": model.value,
        "points": int(result.parameter.size),
        "critical_points": [
            {"location": cp.location, "score": cp.score, "label": cp.label} for cp in result.critical_points
        ],
    }
    if model is Model.KITAEV:
        summary["link"] = config.link.value
    _write_json(summary, config.json_path)
    return EXIT_OK


def cmd_props(s):
    names = [n.strip() for n in str(s["suite"]).split(",") if n.strip()]
    results = run_suites(names, seed=_convert(s, "seed", int), n_states=_convert(s, "states", int))
    for r in results:
        print(r.line())
    if s.get("json"):
        with open(s["json"], "w", encoding="utf-8") as fh:
            json.dump([vars(r) for r in results], fh, indent=2)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPS_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on malformed flags
    try:
        s = _settings(args)
        if args.command == "state":
            return cmd_state(s)
        if args.command == "props":
            return cmd_props(s)
        return cmd_scan(s, Model(args.command))
    except (IntegrationError, OptimizerError, ArithmeticError) as exc:
        print(f"cic: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"cic: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
