import argparse
import logging
from typing import Any

from tagminer.cli.deps import (
    add_command,
    fraction,
    path_arg,
    positive_int,
    tag,
    term_category,
    transactions_arg,
)
from tagminer.core.config import settings
from tagminer.core.errors import UsageError
from tagminer.corpus import read_posts
from tagminer.lexicon import (
    apply_review,
    enqueue,
    load_lexicon,
    load_queue,
    pending,
    propose_candidates,
    recategorize,
    record_decision,
    save_lexicon,
    save_queue,
    seed_from_frequency,
)
from tagminer.miner import read_itemsets
from tagminer.models import CandidateTerm, ReviewDecision
from tagminer.utils import format_decimal

logger = logging.getLogger(__name__)


def handle_seed_lexicon(args: argparse.Namespace) -> None:
    lex = seed_from_frequency(read_posts(args.posts), args.k)
    save_lexicon(lex, args.out)


def _candidate_row(candidate: CandidateTerm) -> str:
    category = candidate.proposed_category.value if candidate.proposed_category else "-"
    evidence = " ".join(",".join(items) for items in candidate.evidence)
    return f"{candidate.term}|{format_decimal(candidate.support)}|{category}|{evidence}"


def handle_expand(args: argparse.Namespace) -> None:
    lex = load_lexicon(args.lexicon)
    itemsets = read_itemsets(args.sets, total=args.transactions)
    candidates = propose_candidates(itemsets, lex, args.min_support)
    queue = load_queue(args.queue)
    updated = enqueue(queue, candidates)
    save_queue(updated, args.queue)
    for candidate in updated[len(queue) :]:
        print(_candidate_row(candidate))


def handle_review(args: argparse.Namespace) -> None:
    queue = load_queue(args.queue)
    lex = load_lexicon(args.lexicon)
    decisions = [
        *((term, ReviewDecision(action="approve", category=c)) for term, c in args.approve),
        *((term, ReviewDecision(action="reject")) for term in args.reject),
    ]
    if not decisions and not args.recategorize:
        for candidate in pending(queue):
            print(_candidate_row(candidate))
        return

    start_version = lex.version
    for term, category in args.recategorize:
        lex = recategorize(lex, term, category)
    by_term = {c.term: c for c in queue}
    for term, decision in decisions:
        if term not in by_term:
            raise UsageError(f"{term!r} is not in the review queue {args.queue}")
        lex, decided = apply_review(lex, by_term[term], decision)
        by_term[term] = decided
        queue = record_decision(queue, decided)

    if lex.version != start_version:
        save_lexicon(lex, args.lexicon)
    if decisions:
        save_queue(queue, args.queue)
    logger.info(f"lexicon now at version {lex.version} with {len(lex)} terms")


def register(subparsers: Any) -> None:
    seed = add_command(
        subparsers,
        "seed-lexicon",
        help="Seed a lexicon with the most frequent tags of labeled posts.",
    )
    path_arg(seed, "--posts", help="labeled drug-related Post JSONL")
    seed.add_argument("--k", type=positive_int, default=settings.SEED_K)
    path_arg(seed, "--out", help="lexicon JSON output")
    seed.set_defaults(handler=handle_seed_lexicon)

    expand = add_command(
        subparsers,
        "expand",
        help="Queue non-lexicon terms of frequent itemsets for review.",
    )
    path_arg(expand, "--sets", help="itemsets file written by 'mine'")
    transactions_arg(expand)
    path_arg(expand, "--lexicon", help="lexicon JSON")
    expand.add_argument(
        "--min-support", type=fraction, default=settings.EXPANSION_MIN_SUPPORT
    )
    path_arg(expand, "--queue", help="review queue JSONL, created if missing")
    expand.set_defaults(handler=handle_expand)

    review = add_command(
        subparsers,
        "review",
        help="List pending candidates, or record approve/reject decisions.",
    )
    path_arg(review, "--queue", help="review queue JSONL")
    path_arg(review, "--lexicon", help="lexicon JSON, updated in place")
    review.add_argument(
        "--approve",
        type=term_category,
        action="append",
        default=[],
        metavar="TERM=CATEGORY",
    )
    review.add_argument(
        "--reject", type=tag, action="append", default=[], metavar="TERM"
    )
    review.add_argument(
        "--recategorize",
        type=term_category,
        action="append",
        default=[],
        metavar="TERM=CATEGORY",
    )
    review.set_defaults(handler=handle_review)
