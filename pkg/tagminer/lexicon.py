import json
import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from tagminer.core.errors import (
    ContractViolationError,
    DataError,
    EmptyCorpusError,
    ParseError,
    ReviewConflictError,
)
from tagminer.models import (
    CandidateTerm,
    Category,
    ItemSet,
    Lexicon,
    LexiconEntry,
    PostRecord,
    ReviewDecision,
    ReviewStatus,
    Source,
)
from tagminer.utils import as_fraction, atomic_write_text, format_decimal, write_lines

logger = logging.getLogger(__name__)


def seed_from_frequency(labeled_posts: Sequence[PostRecord], k: int) -> Lexicon:
    """
    Version-1 lexicon of the k tags contained in the most labeled posts.

    Ties go to the lexicographically smaller tag. Every entry starts in the
    general category; drug categories are assigned through review.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    frequency = Counter(tag for post in labeled_posts for tag in post.tags)
    if not frequency:
        raise EmptyCorpusError("labeled corpus has no tagged posts")
    ranked = sorted(frequency.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    entries = {
        term: LexiconEntry(category=Category.GENERAL, source=Source.SEED, added_version=1)
        for term, _ in sorted(ranked)
    }
    logger.info(
        f"seeded lexicon with {len(entries)} of {len(frequency)} distinct tags "
        f"from {len(labeled_posts)} posts"
    )
    return Lexicon(version=1, entries=entries)


def _guess_category(lex: Lexicon, evidence: list[tuple[str, ...]]) -> Category | None:
    found = {
        lex.category_of(item)
        for items in evidence
        for item in items
        if item in lex and lex.category_of(item) != Category.GENERAL
    }
    return found.pop() if len(found) == 1 else None


def propose_candidates(
    itemsets: Iterable[ItemSet], lex: Lexicon, min_support: float = 0.20
) -> list[CandidateTerm]:
    """
    Non-lexicon terms of itemsets whose support is strictly over min_support
    and which share the itemset with at least one lexicon term.
    """
    threshold = as_fraction(min_support)
    best: dict[str, Fraction] = {}
    evidence: dict[str, list[tuple[str, ...]]] = {}
    for itemset in itemsets:
        if itemset.support <= threshold:
            continue
        known = [item for item in itemset.items if item in lex]
        if not known:
            continue
        for term in itemset.items:
            if term in lex:
                continue
            best[term] = max(best.get(term, itemset.support), itemset.support)
            evidence.setdefault(term, []).append(itemset.items)

    ranked = sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))
    candidates = [
        CandidateTerm(
            term=term,
            support=float(support),
            evidence=tuple(sorted(evidence[term])),
            proposed_category=_guess_category(lex, evidence[term]),
        )
        for term, support in ranked
    ]
    logger.info(f"proposed {len(candidates)} candidate terms over support {min_support}")
    return candidates


def apply_review(
    lex: Lexicon,
    candidate: CandidateTerm,
    decision: ReviewDecision,
    *,
    decided_at: datetime | None = None,
) -> tuple[Lexicon, CandidateTerm]:
    """Return the lexicon after the decision and the decided candidate."""
    if decision.action == "approve" and candidate.term in lex:
        raise ReviewConflictError(f"term {candidate.term!r} is already in the lexicon")
    if candidate.status != ReviewStatus.PENDING:
        raise ContractViolationError(
            f"candidate {candidate.term!r} was already {candidate.status.value}"
        )
    decided_at = decided_at or datetime.now(timezone.utc)

    if decision.action == "reject":
        logger.info(f"rejected {candidate.term!r}")
        return lex, candidate.model_copy(
            update={"status": ReviewStatus.REJECTED, "decided_at": decided_at}
        )

    assert decision.category is not None
    version = lex.version + 1
    entries = dict(lex.entries)
    entries[candidate.term] = LexiconEntry(
        category=decision.category, source=Source.MINED, added_version=version
    )
    logger.info(
        f"approved {candidate.term!r} as {decision.category.value}, lexicon version {version}"
    )
    decided = candidate.model_copy(
        update={
            "status": ReviewStatus.APPROVED,
            "proposed_category": decision.category,
            "decided_at": decided_at,
        }
    )
    return Lexicon(version=version, entries=dict(sorted(entries.items()))), decided


def recategorize(lex: Lexicon, term: str, category: Category) -> Lexicon:
    if term not in lex:
        raise ReviewConflictError(f"term {term!r} is not in the lexicon")
    entry = lex.entries[term]
    if entry.category == category:
        return lex
    entries = dict(lex.entries)
    entries[term] = entry.model_copy(update={"category": category})
    logger.info(f"recategorized {term!r} from {entry.category.value} to {category.value}")
    return Lexicon(version=lex.version + 1, entries=entries)


def lexicon_to_json(lex: Lexicon) -> str:
    document = {
        "version": lex.version,
        "entries": [
            {
                "term": term,
                "category": entry.category.value,
                "source": entry.source.value,
                "added_version": entry.added_version,
            }
            for term, entry in sorted(lex.entries.items())
        ],
    }
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def save_lexicon(lex: Lexicon, path: Path | str) -> None:
    atomic_write_text(path, lexicon_to_json(lex))


def load_lexicon(path: Path | str) -> Lexicon:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"cannot read lexicon: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", path=path, line=e.lineno)
    try:
        raw_entries = document["entries"]
        entries: dict[str, LexiconEntry] = {}
        for raw in raw_entries:
            term = raw["term"]
            if term in entries:
                raise DataError(f"duplicate term {term!r}", path=path)
            entries[term] = LexiconEntry.model_validate(
                {k: v for k, v in raw.items() if k != "term"}
            )
        lex = Lexicon(version=document["version"], entries=entries)
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed lexicon: {e!r}", path=path)
    except ValidationError as e:
        raise DataError(f"invalid lexicon: {e}", path=path)
    logger.info(f"loaded lexicon version {lex.version} with {len(lex)} terms from {path}")
    return lex


def _candidate_to_line(candidate: CandidateTerm) -> str:
    obj: dict[str, Any] = {
        "term": candidate.term,
        "support": float(format_decimal(candidate.support)),
        "evidence": [list(items) for items in candidate.evidence],
        "status": candidate.status.value,
        "proposed_category": (
            candidate.proposed_category.value if candidate.proposed_category else None
        ),
        "decided_at": candidate.decided_at.isoformat() if candidate.decided_at else None,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def save_queue(queue: Iterable[CandidateTerm], path: Path | str) -> None:
    write_lines(path, [_candidate_to_line(c) for c in queue])


def load_queue(path: Path | str) -> list[CandidateTerm]:
    """Review queue entries in file order; a missing file is an empty queue."""
    path = Path(path)
    if not path.exists():
        return []
    queue = []
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    queue.append(CandidateTerm.model_validate_json(line))
                except ValidationError as e:
                    raise ParseError(str(e), path=path, line=line_no)
    except OSError as e:
        raise DataError(f"cannot read review queue: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)
    return queue


def enqueue(
    queue: Sequence[CandidateTerm], candidates: Iterable[CandidateTerm]
) -> list[CandidateTerm]:
    queued = {c.term for c in queue}
    added = [c for c in candidates if c.term not in queued]
    logger.info(f"queued {len(added)} new candidates")
    return [*queue, *added]


def record_decision(
    queue: Sequence[CandidateTerm], candidate: CandidateTerm
) -> list[CandidateTerm]:
    if not any(c.term == candidate.term for c in queue):
        return [*queue, candidate]
    return [candidate if c.term == candidate.term else c for c in queue]


def pending(queue: Iterable[CandidateTerm]) -> list[CandidateTerm]:
    return [c for c in queue if c.status == ReviewStatus.PENDING]
