import argparse
from pathlib import Path
from typing import Any

from tagminer.cli.deps import add_command, path_arg
from tagminer.core.config import settings
from tagminer.core.errors import UsageError
from tagminer.screening import read_screened
from tagminer.temporal import (
    build_temporal_report,
    render_temporal_report,
    temporal_report_to_json,
)
from tagminer.utils import atomic_write_text


def handle_temporal(args: argparse.Namespace) -> None:
    out_json: Path = args.out_json or args.out.with_suffix(".json")
    if out_json.resolve() == args.out.resolve():
        raise UsageError(f"the JSON report would overwrite {args.out}; pass --out-json")
    report = build_temporal_report(read_screened(args.screened), settings.SURVEY_SHARES)
    atomic_write_text(args.out, render_temporal_report(report))
    atomic_write_text(out_json, temporal_report_to_json(report))


def register(subparsers: Any) -> None:
    parser = add_command(
        subparsers,
        "temporal",
        help="Hour and weekday histograms and category shares of drug-related posts.",
    )
    path_arg(parser, "--screened", help="screened JSONL written by 'screen'")
    path_arg(parser, "--out", help="text report")
    path_arg(
        parser,
        "--out-json",
        required=False,
        help="raw counts as JSON (default: the report path with a .json suffix)",
    )
    parser.set_defaults(handler=handle_temporal)
