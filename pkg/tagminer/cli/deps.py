import argparse
from pathlib import Path
from typing import Any, NoReturn

from tagminer.core.errors import RejectedTagError, UsageError
from tagminer.corpus import normalize_tag
from tagminer.models import Category


class ArgumentParser(argparse.ArgumentParser):
    """Usage problems surface as UsageError instead of exiting the process."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not in (0, 1]")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return value


def tag(text: str) -> str:
    try:
        return normalize_tag(text)
    except RejectedTagError as e:
        raise argparse.ArgumentTypeError(str(e))


def term_category(text: str) -> tuple[str, Category]:
    term, sep, name = text.partition("=")
    if not sep or not term:
        raise argparse.ArgumentTypeError(f"expected TERM=CATEGORY, got {text!r}")
    try:
        return tag(term), Category(name)
    except ValueError:
        choices = ", ".join(c.value for c in Category)
        raise argparse.ArgumentTypeError(f"unknown category {name!r} (one of {choices})")


def add_command(subparsers: Any, name: str, *, help: str) -> ArgumentParser:
    parser: ArgumentParser = subparsers.add_parser(name, help=help, description=help)
    return parser


def path_arg(parser: ArgumentParser, flag: str, *, help: str, required: bool = True) -> None:
    parser.add_argument(flag, type=Path, required=required, help=help)


def transactions_arg(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--transactions",
        type=positive_int,
        default=None,
        help="transaction total, needed when the itemsets file has no counts companion",
    )
