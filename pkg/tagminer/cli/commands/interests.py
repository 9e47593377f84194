import argparse
from typing import Any

from tagminer.cli.deps import add_command, fraction, path_arg, positive_int
from tagminer.core.config import settings
from tagminer.corpus import read_follows
from tagminer.interests import build_interest_report, render_interest_report
from tagminer.models import MinerConfig
from tagminer.utils import atomic_write_text


def handle_interests(args: argparse.Namespace) -> None:
    cfg = MinerConfig(
        min_support=args.min_support,
        min_confidence=args.min_confidence,
        max_itemset_size=args.max_size,
        partitions=args.partitions,
    )
    report = build_interest_report(read_follows(args.follows), cfg, args.top)
    atomic_write_text(args.out, render_interest_report(report, cfg))


def register(subparsers: Any) -> None:
    parser = add_command(
        subparsers,
        "interests",
        help="Top followed accounts and association rules among followed accounts.",
    )
    path_arg(parser, "--follows", help="Follow JSONL")
    parser.add_argument(
        "--min-support", type=fraction, default=settings.INTEREST_MIN_SUPPORT
    )
    parser.add_argument(
        "--min-confidence", type=fraction, default=settings.MIN_CONFIDENCE
    )
    parser.add_argument("--top", type=positive_int, default=settings.TOP_ACCOUNTS)
    parser.add_argument("--max-size", type=positive_int, default=None)
    parser.add_argument(
        "--partitions", type=positive_int, default=settings.MINER_PARTITIONS
    )
    path_arg(parser, "--out", help="interest report")
    parser.set_defaults(handler=handle_interests)
