"""Command-line entry point: render figures from latentgraph output files."""

from __future__ import annotations

import argparse
import json
import sys

from .render import COLOR_MODES, render_curve, render_panels


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recovery-plots",
                                     description="Render figures from latentgraph "
                                                 "CSV/JSON output files.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("panels", help="truth vs recovered scatter panels")
    p.add_argument("--dataset", required=True, help="dataset JSON (must contain z)")
    p.add_argument("--recovered", required=True, help="coordinates CSV")
    p.add_argument("--eval", dest="eval_path", required=True, help="evaluation JSON")
    p.add_argument("--color-by", choices=COLOR_MODES, default="x-rank")
    p.add_argument("--out", required=True, help="output image path")

    p = sub.add_parser("curve", help="d_g versus graph size across reports")
    p.add_argument("--reports", nargs="+", required=True,
                   help="evaluation or experiment JSON files")
    p.add_argument("--out", required=True, help="output image path")

    return parser


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "panels":
            render_panels(args.dataset, args.recovered, args.eval_path, args.out,
                          color_by=args.color_by)
        else:
            render_curve(args.reports, args.out)
        return 0
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"recovery-plots: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
