"""Command-line driver: ``qmc sweep``, ``qmc verify``, ``qmc point``.

Exit codes: 0 success, 1 usage/config error, 2 verification failure,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from . import __version__
from .cycle import cycle_report
from .errors import ConfigError, ParseError, QmcError
from .sweep import (
    PRESETS,
    build_config,
    format_value,
    manifest_path_for,
    merge_settings,
    read_manifest,
    read_rows_csv,
    run_sweep,
    verify_rows,
    write_manifest,
    write_rows_csv,
)

_POINT_FIELDS = [
    "p_plus", "W", "Qc", "Qh", "dSm", "mutual_info", "S_baths", "sigma",
    "sigma_cold", "sigma_hot", "cop", "cop_carnot", "cop_ratio",
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmc",
        description="Measurement-driven qubit refrigerator: sweeps, verification, single points.",
    )
    parser.add_argument("--version", action="version", version=f"qmc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_settings_args(p):
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
        p.add_argument("--set", dest="sets", action="append", default=[],
                       metavar="KEY=VALUE", help="override one setting (repeatable)")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep and write CSV + manifest")
    add_settings_args(p_sweep)
    p_sweep.add_argument("--jobs", type=int, help="worker processes (default: available parallelism)")
    p_sweep.add_argument("--out", help="output CSV path")

    p_verify = sub.add_parser("verify", help="check the invariants of an emitted CSV")
    p_verify.add_argument("csv", help="sweep CSV to verify")

    p_point = sub.add_parser("point", help="print one cycle report as key = value text")
    add_settings_args(p_point)
    return parser


def _overrides_from_args(args) -> dict[str, str]:
    overrides: dict[str, str] = {}
    for item in args.sets:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = str(args.jobs)
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    return overrides


def _load_settings(args) -> dict[str, object]:
    config_text = None
    if args.config is not None:
        with open(args.config) as f:
            config_text = f.read()
    return merge_settings(
        preset=args.preset,
        config_text=config_text,
        overrides=_overrides_from_args(args),
        config_source=args.config or "<config>",
    )


def _cmd_sweep(args) -> int:
    config = build_config(_load_settings(args))
    result = run_sweep(config)
    write_rows_csv(result.rows, config.output_path)
    manifest_path = manifest_path_for(config.output_path)
    write_manifest(result.manifest, manifest_path)
    bad = sum(1 for r in result.rows if r.status.startswith(("error", "oracle-mismatch")))
    note = f" ({bad} rows flagged)" if bad else ""
    print(f"wrote {config.output_path} ({len(result.rows)} rows) and {manifest_path}{note}")
    return 0


def _cmd_verify(args) -> int:
    rows = read_rows_csv(args.csv)
    t_cold = t_hot = None
    try:
        manifest = read_manifest(manifest_path_for(args.csv))
        t_cold = float(manifest["T_c"])
        t_hot = float(manifest["T_h"])
    except (OSError, KeyError, ValueError):
        pass  # bound check degrades to a skip
    summary = verify_rows(rows, t_cold=t_cold, t_hot=t_hot)
    for check in summary.checks:
        if check.passed:
            note = f" ({check.detail})" if check.detail else ""
            print(f"{check.name}: PASS{note}")
        else:
            where = f" at row {check.first_bad_row}" if check.first_bad_row is not None else ""
            print(f"{check.name}: FAIL{where} ({check.detail})")
    intervals = ",".join(str(i) for i in summary.crossing_intervals) or "none"
    print(f"crossing-intervals: {intervals}")
    print(f"verification: {'PASS' if summary.all_passed else 'FAIL'}")
    return 0 if summary.all_passed else 2


def _cmd_point(args) -> int:
    settings = _load_settings(args)
    config = build_config(settings)
    report = cycle_report(config.base)
    print(f"theta = {format_value(settings['theta'])}")
    print(f"phi = {format_value(settings['phi'])}")
    for name in _POINT_FIELDS:
        print(f"{name} = {format_value(getattr(report, name))}")
    print(f"q_pp = {format_value(report.kernel.q_pp)}")
    print(f"q_pm = {format_value(report.kernel.q_pm)}")
    print(f"regime = {report.regime}")
    print(f"include_unitary = {'true' if report.include_unitary else 'false'}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses code 2 for usage errors
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "point":
            return _cmd_point(args)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except QmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
