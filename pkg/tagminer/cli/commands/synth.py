import argparse
import json
import logging
from pathlib import Path
from typing import Any

from tagminer.cli.deps import add_command, path_arg
from tagminer.core.config import settings
from tagminer.core.errors import DataError
from tagminer.corpus import write_follows, write_posts
from tagminer.lexicon import save_lexicon
from tagminer.models import GenerationSpec
from tagminer.synth import gen_synthetic_corpus, synthetic_lexicon

logger = logging.getLogger(__name__)


def load_spec(path: Path | None, overrides: dict[str, Any]) -> GenerationSpec:
    document: dict[str, Any] = {}
    if path is not None:
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise DataError(f"cannot read generation spec: {e.strerror}", path=path)
        except json.JSONDecodeError as e:
            raise DataError(f"invalid JSON: {e.msg}", path=path, line=e.lineno)
    document.update({k: v for k, v in overrides.items() if v is not None})
    return GenerationSpec.model_validate(document)


def handle_synth(args: argparse.Namespace) -> None:
    spec = load_spec(args.spec, {"n_posts": args.n_posts, "n_users": args.n_users})
    posts, follows = gen_synthetic_corpus(args.seed, spec)
    write_posts(posts, args.out_posts)
    write_follows(follows, args.out_follows)
    if args.out_lexicon is not None:
        save_lexicon(synthetic_lexicon(spec), args.out_lexicon)
    logger.info(f"wrote {args.out_posts} and {args.out_follows}")


def register(subparsers: Any) -> None:
    parser = add_command(
        subparsers, "synth", help="Generate a seeded synthetic post and follow corpus."
    )
    parser.add_argument("--seed", type=int, default=settings.RANDOM_SEED)
    path_arg(parser, "--spec", required=False, help="generation parameters as JSON")
    parser.add_argument("--n-posts", type=int, help="override the number of posts")
    parser.add_argument("--n-users", type=int, help="override the number of follow users")
    path_arg(parser, "--out-posts", help="Post JSONL output")
    path_arg(parser, "--out-follows", help="Follow JSONL output")
    path_arg(
        parser,
        "--out-lexicon",
        required=False,
        help="write the generator vocabulary as a seed lexicon",
    )
    parser.set_defaults(handler=handle_synth)
