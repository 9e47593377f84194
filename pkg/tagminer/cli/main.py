import argparse
import logging
import sys
from collections.abc import Sequence

import sentry_sdk
from pydantic import ValidationError

from tagminer import __version__
from tagminer.cli.commands import interests, lexicon, mine, screen, synth, temporal
from tagminer.cli.deps import ArgumentParser
from tagminer.core.config import settings
from tagminer.core.errors import TagminerError, UsageError
from tagminer.models import LEXICON_FORMAT_VERSION

logger = logging.getLogger(__name__)

COMMANDS = (synth, lexicon, screen, mine, temporal, interests)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="tagminer",
        description="Hashtag lexicon screening and frequent pattern mining.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"tagminer {__version__} (lexicon format {LEXICON_FORMAT_VERSION})",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except UsageError as e:
        logger.error(str(e))
        return e.exit_code

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL.upper()
    )
    if args.command is None:
        parser.print_help(sys.stderr)
        return UsageError.exit_code

    try:
        args.handler(args)
    except ValidationError as e:
        logger.error(f"invalid configuration: {e}")
        return UsageError.exit_code
    except TagminerError as e:
        logger.error(str(e))
        return e.exit_code
    return 0


def main() -> None:
    if settings.SENTRY_DSN and settings.ENVIRONMENT != "local":
        sentry_sdk.init(dsn=str(settings.SENTRY_DSN))
    sys.exit(run())


if __name__ == "__main__":
    main()
