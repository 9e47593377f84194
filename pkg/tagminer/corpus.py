import json
import logging
import unicodedata
from collections.abc import Callable, Iterable, Iterator, Sequence
from pathlib import Path
from typing import Any, TypeVar

from pydantic import ValidationError

from tagminer.core.errors import DataError, ParseError, RejectedTagError
from tagminer.models import FollowRecord, PostRecord, Transaction
from tagminer.utils import write_lines

logger = logging.getLogger(__name__)

T = TypeVar("T")

_REMOVED = str.maketrans("", "", ",\n\r")


def _canonical(raw: str, prefix: str) -> str:
    text = unicodedata.normalize("NFKC", raw.strip())
    text = unicodedata.normalize("NFKC", text.casefold())
    text = text.translate(_REMOVED).strip()
    return text.lstrip(prefix).strip()


def _normalize(raw: str, prefix: str) -> str:
    if not raw.strip():
        raise RejectedTagError(f"empty tag {raw!r}")
    text = _canonical(raw, prefix)
    # case folding and compatibility mapping can feed each other; settle them
    for _ in range(10):
        again = _canonical(text, prefix)
        if again == text:
            break
        text = again
    if not text:
        raise RejectedTagError(f"tag {raw!r} is empty after normalization")
    return text


def normalize_tag(raw: str) -> str:
    """Canonical hashtag item: '#' stripped, NFKC, case folded, commas and
    newlines removed. Raises RejectedTagError when nothing is left."""
    return _normalize(raw, "#")


def normalize_account(raw: str) -> str:
    return _normalize(raw, "@")


def _normalize_all(
    raw_items: Any,
    normalize: Callable[[str], str],
    *,
    field: str,
    line_no: int | None,
) -> tuple[frozenset[str], int]:
    if raw_items is None:
        return frozenset(), 0
    if not isinstance(raw_items, list):
        raise ParseError(f"'{field}' must be an array", line=line_no)
    items = set()
    dropped = 0
    for raw in raw_items:
        if not isinstance(raw, str):
            dropped += 1
            continue
        try:
            items.add(normalize(raw))
        except RejectedTagError:
            dropped += 1
    return frozenset(items), dropped


def _load_object(line: str, line_no: int | None) -> dict[str, Any]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=line_no)
    if not isinstance(obj, dict):
        raise ParseError("record is not a JSON object", line=line_no)
    return obj


def _require_str(obj: dict[str, Any], key: str, line_no: int | None) -> str:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, str | int):
        raise ParseError(f"missing or invalid '{key}'", line=line_no)
    text = str(value)
    if not text:
        raise ParseError(f"empty '{key}'", line=line_no)
    return text


def parse_post_line(line: str, line_no: int | None = None) -> PostRecord:
    obj = _load_object(line, line_no)
    post_id = _require_str(obj, "id", line_no)
    author = _require_str(obj, "user", line_no)
    taken_at = obj.get("taken_at")
    if isinstance(taken_at, bool) or not isinstance(taken_at, int) or taken_at < 0:
        raise ParseError("missing or invalid 'taken_at'", line=line_no)
    caption = obj.get("caption")
    if caption is not None and not isinstance(caption, str):
        raise ParseError("'caption' must be a string", line=line_no)
    tags, dropped = _normalize_all(
        obj.get("tags"), normalize_tag, field="tags", line_no=line_no
    )
    if dropped:
        where = f"line {line_no}" if line_no is not None else f"post {post_id}"
        logger.warning(f"{where}: dropped {dropped} malformed tags")
    return PostRecord(
        id=post_id, author=author, taken_at=taken_at, tags=tags, caption=caption
    )


def parse_follow_line(line: str, line_no: int | None = None) -> FollowRecord:
    obj = _load_object(line, line_no)
    user = _require_str(obj, "user", line_no)
    follows, dropped = _normalize_all(
        obj.get("follows"), normalize_account, field="follows", line_no=line_no
    )
    if dropped:
        logger.warning(f"line {line_no}: dropped {dropped} malformed account names")
    if not follows:
        raise ParseError(f"user {user!r} follows nobody", line=line_no)
    return FollowRecord(user=user, follows=follows)


def _read_jsonl(
    path: Path | str, parse: Callable[[str, int | None], T]
) -> Iterator[T]:
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    yield parse(line, line_no)
                except ParseError as e:
                    raise ParseError(e.detail, path=path, line=line_no)
                except ValidationError as e:
                    raise ParseError(str(e), path=path, line=line_no)
    except OSError as e:
        raise DataError(f"cannot read file: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)


def read_posts(path: Path | str) -> list[PostRecord]:
    posts = list(_read_jsonl(path, parse_post_line))
    logger.info(f"read {len(posts)} posts from {path}")
    return posts


def read_follows(path: Path | str) -> list[FollowRecord]:
    records = list(_read_jsonl(path, parse_follow_line))
    logger.info(f"read {len(records)} follow records from {path}")
    return records


def _dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def post_to_line(post: PostRecord) -> str:
    obj: dict[str, Any] = {
        "id": post.id,
        "user": post.author,
        "taken_at": post.taken_at,
        "tags": sorted(post.tags),
    }
    if post.caption is not None:
        obj["caption"] = post.caption
    return _dumps(obj)


def write_posts(posts: Iterable[PostRecord], path: Path | str) -> None:
    write_lines(path, [post_to_line(post) for post in posts])


def write_follows(records: Iterable[FollowRecord], path: Path | str) -> None:
    write_lines(
        path,
        [_dumps({"user": r.user, "follows": sorted(r.follows)}) for r in records],
    )


def posts_to_transactions(posts: Sequence[PostRecord]) -> list[Transaction]:
    return [Transaction(items=post.tags) for post in posts if post.tags]


def write_transactions_csv(tx: Iterable[Transaction], path: Path | str) -> None:
    write_lines(path, [",".join(t.sorted_items()) for t in tx])


def read_transactions_csv(path: Path | str) -> list[Transaction]:
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            text = handle.read()
    except OSError as e:
        raise DataError(f"cannot read file: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)
    rows = text.split("\n")
    if rows and rows[-1] == "":
        rows.pop()
    transactions = []
    for row_no, row in enumerate(rows, start=1):
        items = row.split(",")
        if "" in items:
            raise ParseError("empty item in row", path=path, line=row_no, unit="row")
        try:
            transactions.append(Transaction(items=frozenset(items)))
        except ValidationError as e:
            raise ParseError(str(e), path=path, line=row_no, unit="row")
    logger.info(f"read {len(transactions)} transactions from {path}")
    return transactions
