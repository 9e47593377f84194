import argparse
from typing import Any

from tagminer.cli.deps import add_command, path_arg, positive_int
from tagminer.core.config import settings
from tagminer.corpus import read_posts
from tagminer.lexicon import load_lexicon
from tagminer.screening import screen_posts, write_screened


def _purity(text: str) -> float:
    value = float(text)
    if not 0.5 <= value <= 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not in [0.5, 1]")
    return value


def handle_screen(args: argparse.Namespace) -> None:
    lex = load_lexicon(args.lexicon)
    rows = screen_posts(read_posts(args.posts), lex, args.min_matches, args.purity)
    write_screened(rows, args.out)


def register(subparsers: Any) -> None:
    parser = add_command(
        subparsers,
        "screen",
        help="Flag drug-related posts and assign drug categories.",
    )
    path_arg(parser, "--posts", help="Post JSONL")
    path_arg(parser, "--lexicon", help="lexicon JSON")
    parser.add_argument("--min-matches", type=positive_int, default=settings.MIN_MATCHES)
    parser.add_argument("--purity", type=_purity, default=settings.PURITY)
    path_arg(parser, "--out", help="screened JSONL output")
    parser.set_defaults(handler=handle_screen)
