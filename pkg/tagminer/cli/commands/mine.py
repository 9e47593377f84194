import argparse
import logging
from pathlib import Path
from typing import Any

from tagminer.cli.deps import (
    add_command,
    fraction,
    path_arg,
    positive_int,
    transactions_arg,
)
from tagminer.core.config import settings
from tagminer.corpus import (
    posts_to_transactions,
    read_posts,
    read_transactions_csv,
    write_transactions_csv,
)
from tagminer.miner import (
    association_rules,
    frequent_itemsets,
    read_itemsets,
    write_itemsets,
    write_rules,
)
from tagminer.models import MinerConfig

logger = logging.getLogger(__name__)


def handle_mine(args: argparse.Namespace) -> None:
    if args.tx is not None:
        tx = read_transactions_csv(args.tx)
    else:
        tx = posts_to_transactions(read_posts(args.posts))
    if args.out_tx is not None:
        write_transactions_csv(tx, args.out_tx)
    cfg = MinerConfig(
        min_support=args.min_support,
        max_itemset_size=args.max_size,
        partitions=args.partitions,
    )
    itemsets = frequent_itemsets(tx, cfg)
    write_itemsets(itemsets, args.out, total=len(tx))
    logger.info(f"{len(itemsets)} frequent itemsets over {len(tx)} transactions")


def handle_rules(args: argparse.Namespace) -> None:
    itemsets = read_itemsets(args.sets, total=args.transactions)
    cfg = MinerConfig(
        min_support=settings.MINING_MIN_SUPPORT, min_confidence=args.min_confidence
    )
    write_rules(association_rules(itemsets, cfg), args.out)


def register(subparsers: Any) -> None:
    mine = add_command(
        subparsers, "mine", help="Mine frequent itemsets with Apriori."
    )
    source = mine.add_mutually_exclusive_group(required=True)
    source.add_argument("--tx", type=Path, help="transactions CSV")
    source.add_argument("--posts", type=Path, help="Post JSONL, one transaction per post")
    path_arg(mine, "--out-tx", required=False, help="also write the transactions CSV")
    mine.add_argument(
        "--min-support", type=fraction, default=settings.MINING_MIN_SUPPORT
    )
    mine.add_argument("--max-size", type=positive_int, default=None)
    mine.add_argument(
        "--partitions", type=positive_int, default=settings.MINER_PARTITIONS
    )
    path_arg(mine, "--out", help="itemsets output")
    mine.set_defaults(handler=handle_mine)

    rules = add_command(
        subparsers, "rules", help="Derive association rules from mined itemsets."
    )
    path_arg(rules, "--sets", help="itemsets file written by 'mine'")
    transactions_arg(rules)
    rules.add_argument(
        "--min-confidence", type=fraction, default=settings.MIN_CONFIDENCE
    )
    path_arg(rules, "--out", help="rules output")
    rules.set_defaults(handler=handle_rules)
