"""
Level-wise Apriori over transactions of string items.

Supports are exact: integer counts over the transaction total. Thresholds
given as decimals are read as the rationals they spell, so a support of
exactly 1/5 meets a min_support of 0.2.
"""

import logging
import math
from collections import Counter
from collections.abc import Iterator, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from pydantic import ValidationError

from tagminer.core.errors import (
    ContractViolationError,
    DataError,
    NotClosedError,
    OracleScaleError,
    ParseError,
)
from tagminer.models import (
    AssociationRule,
    ItemSet,
    ItemSetCounts,
    MinerConfig,
    Transaction,
)
from tagminer.utils import as_fraction, atomic_write_text, format_decimal, write_lines

logger = logging.getLogger(__name__)

Items = tuple[str, ...]

ORACLE_MAX_ITEMS = 20
COUNTS_SUFFIX = ".counts.json"


def min_count(min_support: float, total: int) -> int:
    return math.ceil(as_fraction(min_support) * total)


def _canonical_order(itemset: ItemSet) -> tuple[int, int, Items]:
    return len(itemset.items), -itemset.count, itemset.items


def _count_rows(
    rows: Sequence[Items], candidates: frozenset[Items] | None, k: int
) -> Counter[Items]:
    """Support counts of the level-k candidates within one partition."""
    counts: Counter[Items] = Counter()
    if candidates is None:
        for row in rows:
            counts.update((item,) for item in row)
        return counts

    vocabulary = {item for candidate in candidates for item in candidate}
    for row in rows:
        items = [item for item in row if item in vocabulary]
        if len(items) < k:
            continue
        if math.comb(len(items), k) <= len(candidates):
            for combo in combinations(items, k):
                if combo in candidates:
                    counts[combo] += 1
        else:
            present = set(items)
            for candidate in candidates:
                if present.issuperset(candidate):
                    counts[candidate] += 1
    return counts


def _partition(rows: Sequence[Items], partitions: int) -> list[Sequence[Items]]:
    size = max(1, math.ceil(len(rows) / partitions))
    return [rows[i : i + size] for i in range(0, len(rows), size)]


@contextmanager
def _executor(partitions: int) -> Iterator[Executor | None]:
    if partitions == 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=partitions) as executor:
        yield executor


def _count(
    rows: Sequence[Items],
    candidates: frozenset[Items] | None,
    k: int,
    partitions: int,
    executor: Executor | None,
) -> Counter[Items]:
    if executor is None:
        return _count_rows(rows, candidates, k)
    chunks = _partition(rows, partitions)
    merged: Counter[Items] = Counter()
    # integer addition makes the merge independent of partitioning
    for part in executor.map(
        _count_rows, chunks, [candidates] * len(chunks), [k] * len(chunks)
    ):
        merged.update(part)
    return merged


def generate_candidates(level: Sequence[Sequence[str]]) -> list[Items]:
    """
    Apriori join and prune: size-k sets sharing their first k-1 items are
    joined, and a candidate survives only if all its size-k subsets are in
    `level`.
    """
    if not level:
        return []
    frequent = {tuple(itemset) for itemset in level}
    sizes = {len(itemset) for itemset in frequent}
    if len(sizes) != 1 or 0 in sizes:
        raise ContractViolationError(f"itemsets of mixed sizes {sorted(sizes)}")
    for itemset in frequent:
        if list(itemset) != sorted(set(itemset)):
            raise ContractViolationError(f"itemset {itemset!r} is not canonical")
    k = sizes.pop()

    ordered = sorted(frequent)
    candidates = []
    for i, left in enumerate(ordered):
        for right in ordered[i + 1 :]:
            if left[:-1] != right[:-1]:
                break
            candidate = left + (right[-1],)
            if all(subset in frequent for subset in combinations(candidate, k)):
                candidates.append(candidate)
    return candidates


def frequent_itemsets(tx: Sequence[Transaction], cfg: MinerConfig) -> list[ItemSet]:
    """
    All itemsets with support >= cfg.min_support, one counting pass per
    level, ordered by (size, support descending, items).
    """
    total = len(tx)
    if total == 0:
        return []
    needed = min_count(cfg.min_support, total)
    rows: list[Items] = [t.sorted_items() for t in tx]
    results: list[ItemSet] = []

    with _executor(cfg.partitions) as executor:
        counts = _count(rows, None, 1, cfg.partitions, executor)
        frequent = {items: n for items, n in counts.items() if n >= needed}
        k = 1
        while frequent:
            results.extend(
                ItemSet(items=items, count=n, total=total) for items, n in frequent.items()
            )
            logger.info(f"level {k}: {len(frequent)} frequent itemsets")
            if cfg.max_itemset_size is not None and k >= cfg.max_itemset_size:
                break
            candidates = generate_candidates(list(frequent))
            if not candidates:
                break
            k += 1
            keep = {item for items in frequent for item in items}
            rows = [
                pruned
                for row in rows
                if len(pruned := tuple(item for item in row if item in keep)) >= k
            ]
            logger.debug(f"level {k}: {len(candidates)} candidates over {len(rows)} rows")
            counts = _count(rows, frozenset(candidates), k, cfg.partitions, executor)
            frequent = {c: counts[c] for c in candidates if counts[c] >= needed}

    return sorted(results, key=_canonical_order)


def brute_force_frequent(tx: Sequence[Transaction], cfg: MinerConfig) -> list[ItemSet]:
    """Exhaustive reference miner for small item universes."""
    items = sorted({item for t in tx for item in t.items})
    if len(items) > ORACLE_MAX_ITEMS:
        raise OracleScaleError(
            f"{len(items)} distinct items, the oracle enumerates at most {ORACLE_MAX_ITEMS}"
        )
    total = len(tx)
    if total == 0:
        return []
    needed = min_count(cfg.min_support, total)
    largest = len(items)
    if cfg.max_itemset_size is not None:
        largest = min(largest, cfg.max_itemset_size)

    results = []
    for size in range(1, largest + 1):
        for combo in combinations(items, size):
            n = sum(1 for t in tx if t.items.issuperset(combo))
            if n >= needed:
                results.append(ItemSet(items=combo, count=n, total=total))
    return sorted(results, key=_canonical_order)


def association_rules(
    frequent: Sequence[ItemSet], cfg: MinerConfig
) -> list[AssociationRule]:
    """
    Rules A => S\\A for every frequent S and non-empty proper subset A with
    count(S)/count(A) >= cfg.min_confidence. Subset counts come from
    `frequent` itself, which must be downward closed.
    """
    if not frequent:
        return []
    totals = {itemset.total for itemset in frequent}
    if len(totals) != 1:
        raise ContractViolationError("itemsets were mined from different corpora")
    total = totals.pop()
    counts = {itemset.items: itemset.count for itemset in frequent}
    threshold = as_fraction(cfg.min_confidence)

    rules = []
    for itemset in frequent:
        if len(itemset.items) < 2:
            continue
        for size in range(1, len(itemset.items)):
            for antecedent in combinations(itemset.items, size):
                antecedent_count = counts.get(antecedent)
                if antecedent_count is None:
                    raise NotClosedError(
                        f"subset {antecedent!r} of {itemset.items!r} was not mined"
                    )
                if Fraction(itemset.count, antecedent_count) < threshold:
                    continue
                consequent = tuple(i for i in itemset.items if i not in antecedent)
                rules.append(
                    AssociationRule(
                        antecedent=antecedent,
                        consequent=consequent,
                        count=itemset.count,
                        antecedent_count=antecedent_count,
                        total=total,
                    )
                )
    rules.sort(key=lambda r: (-r.confidence, -r.count, r.antecedent, r.consequent))
    logger.info(f"generated {len(rules)} rules at confidence {cfg.min_confidence}")
    return rules


def itemset_to_line(itemset: ItemSet) -> str:
    return f"{','.join(itemset.items)}|{format_decimal(itemset.support)}"


def rule_to_line(rule: AssociationRule) -> str:
    return (
        f"{','.join(rule.antecedent)}=>{','.join(rule.consequent)}"
        f"|{format_decimal(rule.support)}|{format_decimal(rule.confidence)}"
    )


def counts_path(path: Path | str) -> Path:
    """Companion of an itemsets file holding the transaction total and the
    integer count of every itemset."""
    return Path(path).with_suffix(COUNTS_SUFFIX)


def write_itemsets(itemsets: Sequence[ItemSet], path: Path | str, *, total: int) -> None:
    write_lines(path, [itemset_to_line(itemset) for itemset in itemsets])
    counts = ItemSetCounts(
        transactions=total,
        counts={",".join(itemset.items): itemset.count for itemset in itemsets},
    )
    atomic_write_text(counts_path(path), counts.model_dump_json(indent=2) + "\n")


def _read_lines(path: Path | str) -> list[str]:
    try:
        with open(path, encoding="utf-8", newline="\n") as handle:
            return handle.read().split("\n")
    except OSError as e:
        raise DataError(f"cannot read file: {e.strerror}", path=path)
    except UnicodeDecodeError:
        raise DataError("file is not UTF-8", path=path)


def _read_counts(path: Path) -> ItemSetCounts:
    try:
        return ItemSetCounts.model_validate_json("\n".join(_read_lines(path)))
    except ValidationError as e:
        raise ParseError(str(e), path=path)


def read_itemsets(path: Path | str, *, total: int | None = None) -> list[ItemSet]:
    """
    Itemsets from `item1,item2|support` lines. Counts come from the companion
    written next to the file; without it they are recovered from the printed
    supports, which needs the transaction total.
    """
    lines = _read_lines(path)
    companion = counts_path(path)
    counts: dict[str, int] | None = None
    if companion.exists():
        stored = _read_counts(companion)
        if total is not None and total != stored.transactions:
            raise DataError(
                f"{total} transactions given but {companion} records {stored.transactions}",
                path=path,
            )
        total, counts = stored.transactions, stored.counts
    elif total is None:
        raise DataError(
            f"transaction total unknown: pass it or keep {companion} next to the file",
            path=path,
        )

    itemsets = []
    for line_no, line in enumerate(lines, start=1):
        if not line:
            continue
        fields = line.split("|")
        if len(fields) != 2:
            raise ParseError("expected 'items|support'", path=path, line=line_no)
        items, printed = fields
        try:
            if counts is None:
                count = round(Fraction(printed) * total)
            elif items in counts:
                count = counts[items]
            else:
                raise ParseError(f"itemset missing from {companion}", path=path, line=line_no)
            itemset = ItemSet(items=tuple(items.split(",")), count=count, total=total)
        except (ValueError, ValidationError) as e:
            raise ParseError(str(e), path=path, line=line_no)
        places = len(printed.partition(".")[2])
        if format_decimal(itemset.support, places) != printed:
            raise ParseError(
                f"support {printed} is not a count over {total} transactions",
                path=path,
                line=line_no,
            )
        itemsets.append(itemset)
    return itemsets


def write_rules(rules: Sequence[AssociationRule], path: Path | str) -> None:
    write_lines(path, [rule_to_line(rule) for rule in rules])
