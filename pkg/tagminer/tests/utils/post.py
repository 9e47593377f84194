from itertools import count

from tagminer.models import Category, Lexicon, LexiconEntry, PostRecord, Source

_ids = count(1)


def make_post(*tags: str, taken_at: int = 0, author: str = "u1") -> PostRecord:
    return PostRecord(
        id=f"t{next(_ids)}", author=author, taken_at=taken_at, tags=frozenset(tags)
    )


def make_lexicon(
    categories: dict[str, Category], *, version: int = 1, source: Source = Source.SEED
) -> Lexicon:
    entries = {
        term: LexiconEntry(category=category, source=source, added_version=1)
        for term, category in sorted(categories.items())
    }
    return Lexicon(version=version, entries=entries)
