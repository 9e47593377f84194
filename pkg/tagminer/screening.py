import json
import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from tagminer.core.errors import ContractViolationError, DataError, ParseError
from tagminer.models import (
    Category,
    CategoryAssignment,
    Lexicon,
    PostRecord,
    ScreenedPost,
    ScreenResult,
)
from tagminer.utils import as_fraction, write_lines

logger = logging.getLogger(__name__)


def screen_post(post: PostRecord, lex: Lexicon, min_matches: int = 2) -> ScreenResult:
    matched = post.tags & lex.terms
    return ScreenResult(
        post_id=post.id,
        matched_terms=matched,
        drug_related=len(matched) >= min_matches,
    )


def assign_category(
    post: PostRecord,
    lex: Lexicon,
    purity: float = 0.8,
    *,
    min_matches: int = 2,
) -> CategoryAssignment:
    """
    Assign the drug category holding strictly more than `purity` of the
    post's matched, non-general lexicon terms. General terms are left out of
    both sides of the share.
    """
    if purity < 0.5:
        raise ValueError("purity below 0.5 could assign two categories")
    screened = screen_post(post, lex, min_matches)
    if not screened.drug_related:
        raise ContractViolationError(f"post {post.id!r} is not drug related")

    counts = Counter(
        lex.category_of(term)
        for term in screened.matched_terms
        if lex.category_of(term) != Category.GENERAL
    )
    total = sum(counts.values())
    threshold = as_fraction(purity)
    winners = [c for c, n in counts.items() if n * threshold.denominator > threshold.numerator * total]
    assert len(winners) <= 1, f"post {post.id!r} qualifies for {winners}"
    return CategoryAssignment(post_id=post.id, category=winners[0] if winners else None)


def screen_posts(
    posts: Sequence[PostRecord],
    lex: Lexicon,
    min_matches: int = 2,
    purity: float = 0.8,
) -> list[ScreenedPost]:
    screened = []
    for post in posts:
        result = screen_post(post, lex, min_matches)
        category = None
        if result.drug_related:
            category = assign_category(post, lex, purity, min_matches=min_matches).category
        screened.append(
            ScreenedPost(
                post_id=post.id,
                taken_at=post.taken_at,
                matched_terms=result.matched_terms,
                drug_related=result.drug_related,
                category=category,
            )
        )
    related = sum(s.drug_related for s in screened)
    assigned = sum(s.category is not None for s in screened)
    logger.info(
        f"screened {len(screened)} posts: {related} drug related, {assigned} categorized"
    )
    return screened


def _screened_to_line(row: ScreenedPost) -> str:
    obj: dict[str, Any] = {
        "post_id": row.post_id,
        "taken_at": row.taken_at,
        "matched_terms": sorted(row.matched_terms),
        "drug_related": row.drug_related,
        "category": row.category.value if row.category else None,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_screened(rows: Iterable[ScreenedPost], path: Path | str) -> None:
    write_lines(path, [_screened_to_line(row) for row in rows])


def read_screened(path: Path | str) -> list[ScreenedPost]:
    rows = []
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    rows.append(ScreenedPost.model_validate_json(line))
                except ValidationError as e:
                    raise ParseError(str(e), path=path, line=line_no)
    except OSError as e:
        raise DataError(f"cannot read file: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)
    return rows
