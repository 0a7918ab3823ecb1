"""Command-line front end: ``wdcdiff analyze | check | sweep``.

Exit codes: analyze and sweep return 0 on success, 2 on a configuration
error and 3 on a numerical failure; check returns 0 when every check
passes, 1 when any fails and 2 on bad input.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import config as cfgmod
from . import criteria as cr
from . import verify
from .errors import ConfigError, NumericalError, SelfMapViolation, TruncationError
from .presets import PRESETS, Preset

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _load(args) -> cfgmod.RunConfig:
    user = cfgmod.read_document(args.config) if args.config else {}
    if args.preset:
        for k in ("alpha", "m", "weight", "phi1", "u1", "phi2", "u2"):
            user.pop(k, None)
        user["preset"] = args.preset
    if args.seed is not None:
        user["seed"] = args.seed
    out = dict(user.get("output", {}))
    if getattr(args, "out", None):
        out["path"] = args.out
    if getattr(args, "format", None):
        out["format"] = args.format
    if getattr(args, "traces", False):
        out["traces"] = True
    if out:
        user["output"] = out
    return cfgmod.from_dict(user)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _analyze_config(c: cfgmod.RunConfig) -> cr.CriterionReport:
    if not c.has_pair:
        raise ConfigError("analyze needs a symbol pair (phi1/phi2 keys or a preset)")
    rep = cr.analyze(c.pair, c.params, c.grid, c.a_grid, c.n_schedule, c.tail_start,
                     c.refine_depth, c.seed, c.oracle)
    rep.config = c.echo()
    return rep


def cmd_analyze(args) -> int:
    try:
        c = _load(args)
        rep = _analyze_config(c)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TruncationError, SelfMapViolation, NumericalError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if c.out_format == "json":
        _emit(rep.to_json() + "\n", c.out_path)
    else:
        _emit(rep.to_csv(), c.out_path)
    if c.traces:
        stem = Path(c.out_path).with_suffix("") if c.out_path else Path("wdcdiff")
        for kind in ("n", "a", "r"):
            Path(f"{stem}_{kind}.csv").write_text(rep.trace_csv(kind))
    return EXIT_OK


def _parse_checks(text: str) -> List[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if names == ["all"] or not names:
        return list(verify.ALL_CHECKS)
    bad = [n for n in names if n not in verify.ALL_CHECKS]
    if bad:
        raise ConfigError(f"unknown checks {bad}; choose from {list(verify.ALL_CHECKS)} or 'all'")
    return names


def cmd_check(args) -> int:
    try:
        checks = _parse_checks(args.checks)
        c = _load(args)
        family = None
        if c.has_pair:
            family = [Preset(c.raw["preset"] or "config", c.params, c.pair)]
        result = verify.run_regression(family, c.seed, c.check_grid, checks, c.refine_depth,
                                       c.n_schedule, c.tail_start)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TruncationError, SelfMapViolation, NumericalError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(verify.summary_table(result.outcomes))
    if c.out_path:
        Path(c.out_path).write_text(verify.outcomes_to_json(result.outcomes) + "\n")
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    try:
        c = _load(args)
        rep = _analyze_config(c)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TruncationError, SelfMapViolation, NumericalError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(rep.trace_csv(args.axis), c.out_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wdcdiff",
        description="Boundedness and essential-norm quantities for differences of "
                    "weighted differentiation composition operators B^alpha -> H_v^inf.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", metavar="PATH", required=False,
                       help="JSON run configuration" + ("" if config_required else " (optional)"))
        p.add_argument("--preset", choices=sorted(PRESETS), help="use a named symbol pair")
        p.add_argument("--seed", type=int, help="seed (unsigned 64-bit)")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    a = sub.add_parser("analyze", help="compute every criterion quantity for one pair")
    common(a)
    a.add_argument("--format", choices=("json", "csv"))
    a.add_argument("--traces", action="store_true", help="also write n/a/r trace CSVs")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", help="run verification checks")
    common(c, config_required=False)
    c.add_argument("--checks", default="all", metavar="LIST",
                   help="comma-separated subset of " + ",".join(verify.ALL_CHECKS) + " or 'all'")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="emit one trace as CSV")
    common(s)
    s.add_argument("--axis", choices=("n", "a", "r"), required=True)
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
