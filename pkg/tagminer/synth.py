"""Seeded synthetic corpora with planted temporal, category and co-occurrence
patterns. Output is a pure function of (seed, spec)."""

import logging
import math
from datetime import date

import numpy as np
import numpy.typing as npt

from tagminer.models import (
    Category,
    FollowRecord,
    GenerationSpec,
    Lexicon,
    LexiconEntry,
    PostRecord,
    Source,
)
from tagminer.utils import as_fraction

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86_400
EPOCH = date(1970, 1, 1)


def _probabilities(weights: list[float]) -> npt.NDArray[np.float64]:
    array = np.asarray(weights, dtype=np.float64)
    return array / array.sum()


def _pick(keys: npt.NDArray[np.float64], pool: tuple[str, ...], k: int) -> list[str]:
    # first k of a random permutation of the pool
    order = np.argsort(keys[: len(pool)], kind="stable")[:k]
    return [pool[i] for i in order]


def synthetic_lexicon(spec: GenerationSpec) -> Lexicon:
    """The generator's own vocabulary as a version-1 seed lexicon."""
    entries = {
        term: LexiconEntry(category=category, source=Source.SEED, added_version=1)
        for category, vocabulary in spec.vocabularies.items()
        for term in vocabulary
    }
    return Lexicon(version=1, entries=dict(sorted(entries.items())))


def _generate_posts(rng: np.random.Generator, spec: GenerationSpec) -> list[PostRecord]:
    n = spec.n_posts
    categories = [c for c, w in spec.category_weights.items() if w > 0]
    cat_p = _probabilities([spec.category_weights[c] for c in categories])
    general = spec.vocabularies.get(Category.GENERAL, ())
    widest = max(len(spec.vocabularies.get(c, ())) for c in categories)

    cat_idx = rng.choice(len(categories), size=n, p=cat_p)
    n_cat_tags = rng.integers(spec.min_category_tags, spec.max_category_tags + 1, size=n)
    cat_keys = rng.random((n, widest))
    general_flag = rng.random(n) < spec.general_tag_rate
    general_pick = rng.integers(0, max(len(general), 1), size=n)
    cross_flag = rng.random(n) < spec.cross_category_rate
    cross_pick = rng.random((n, 2))
    n_filler = rng.integers(0, spec.max_filler_tags + 1, size=n)
    filler_keys = rng.random((n, max(len(spec.filler_tags), 1)))
    supports = np.asarray([p.support for p in spec.planted_terms], dtype=np.float64)
    planted_flag = rng.random((n, len(spec.planted_terms))) < supports
    weeks = rng.integers(0, spec.n_weeks, size=n)
    weekdays = rng.choice(7, size=n, p=_probabilities(list(spec.weekday_weights)))
    hours = rng.choice(24, size=n, p=_probabilities(list(spec.hour_weights)))
    seconds = rng.integers(0, 3600, size=n)
    authors = rng.integers(0, max(spec.n_users, 1), size=n)

    first_day = (spec.start_date - EPOCH).days
    posts = []
    for i in range(n):
        category = categories[cat_idx[i]]
        tags = set(_pick(cat_keys[i], spec.vocabularies[category], int(n_cat_tags[i])))
        if general and general_flag[i]:
            tags.add(general[general_pick[i]])
        others = [c for c in categories if c != category]
        if others and cross_flag[i]:
            other = spec.vocabularies[others[int(cross_pick[i, 0] * len(others))]]
            tags.add(other[int(cross_pick[i, 1] * len(other))])
        tags.update(_pick(filler_keys[i], spec.filler_tags, int(n_filler[i])))
        for j, planted in enumerate(spec.planted_terms):
            if planted_flag[i, j]:
                tags.add(planted.term)
                tags.update(planted.companions)
        day = first_day + 7 * int(weeks[i]) + int(weekdays[i])
        posts.append(
            PostRecord(
                id=f"p{i:06d}",
                author=f"user{int(authors[i]):04d}",
                taken_at=day * SECONDS_PER_DAY + int(hours[i]) * 3600 + int(seconds[i]),
                tags=frozenset(tags),
            )
        )
    return posts


def _follow_implied(follows: set[str], implied: dict[str, tuple[str, ...]]) -> None:
    pending = list(follows)
    while pending:
        for name in implied.get(pending.pop(), ()):
            if name not in follows:
                follows.add(name)
                pending.append(name)


def _generate_follows(
    rng: np.random.Generator, spec: GenerationSpec
) -> list[FollowRecord]:
    accounts = spec.follow_accounts
    implied = {a.name: a.implies for a in accounts}
    popularity = np.asarray([a.popularity for a in accounts], dtype=np.float64)
    filler = tuple(f"acct{i:04d}" for i in range(spec.filler_accounts))

    follow_flag = rng.random((spec.n_users, len(accounts))) < popularity
    n_filler = rng.integers(spec.min_follows, spec.min_follows + 10, size=spec.n_users)
    filler_keys = rng.random((spec.n_users, max(len(filler), 1)))
    co_keys = rng.random((spec.n_users, len(spec.co_follows)))

    user_follows = []
    for u in range(spec.n_users):
        follows = {a.name for a, flag in zip(accounts, follow_flag[u]) if flag}
        _follow_implied(follows, implied)
        user_follows.append(follows)

    for g, group in enumerate(spec.co_follows):
        qualifying = [u for u, f in enumerate(user_follows) if f.issuperset(group.given)]
        k = math.ceil(as_fraction(group.rate) * len(qualifying))
        rows = np.asarray(qualifying, dtype=np.intp)
        order = np.argsort(co_keys[rows, g], kind="stable")[:k]
        for i in order:
            chosen = user_follows[qualifying[int(i)]]
            chosen.update(group.also)
            _follow_implied(chosen, implied)

    records = []
    for u, follows in enumerate(user_follows):
        follows.update(_pick(filler_keys[u], filler, int(n_filler[u])))
        if follows:
            records.append(FollowRecord(user=f"user{u:04d}", follows=frozenset(follows)))
    return records


def gen_synthetic_corpus(
    seed: int, spec: GenerationSpec | None = None
) -> tuple[list[PostRecord], list[FollowRecord]]:
    spec = spec or GenerationSpec()
    rng = np.random.default_rng(seed)
    posts = _generate_posts(rng, spec)
    follows = _generate_follows(rng, spec)
    logger.info(
        f"generated {len(posts)} posts and {len(follows)} follow records with seed {seed}"
    )
    return posts, follows
