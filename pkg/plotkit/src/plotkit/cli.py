"""``qmc-plot``: render a sweep CSV as a dual-axis figure.

Exit codes: 0 success, 1 usage error, 2 schema/data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_PRESETS, FigureSpec, render
from .schema import DataError, SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmc-plot",
        description="Render entropy/COP figures from qmc sweep CSVs.",
    )
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument("--figure", choices=sorted(FIGURE_PRESETS), default="custom")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--clip", type=float, default=10.0,
                        help="clip |cop_ratio| at this value (default 10)")
    parser.add_argument("--no-markers", action="store_true",
                        help="suppress the Carnot-crossing markers")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    preset = FIGURE_PRESETS[args.figure]
    try:
        spec = FigureSpec(
            input_csv=args.csv,
            output_path=args.out,
            crossing_markers=not args.no_markers,
            clip=args.clip,
            **preset,
        )
        result = render(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SchemaError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {result.output_path} and {result.sidecar_path}")
    if result.skipped_rows:
        summary = ", ".join(f"{i}:{status}" for i, status in result.skipped_rows[:5])
        more = "..." if len(result.skipped_rows) > 5 else ""
        print(f"skipped {len(result.skipped_rows)} non-ok rows ({summary}{more})")
    intervals = ",".join(str(i) for i, _, _ in result.crossing_intervals) or "none"
    print(f"crossing-intervals: {intervals}")
    if result.clipped_points:
        print(f"clipped {result.clipped_points} cop_ratio points at {args.clip:g}")
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
