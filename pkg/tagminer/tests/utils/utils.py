import random
import string
from collections.abc import Sequence
from fractions import Fraction

from tagminer.models import ItemSet, Transaction


def random_lower_string(k: int = 12) -> str:
    return "".join(random.choices(string.ascii_lowercase, k=k))


def transactions(*rows: str) -> list[Transaction]:
    """transactions("a,b", "c") -> [{a, b}, {c}]"""
    return [Transaction(items=frozenset(row.split(","))) for row in rows]


def support_map(itemsets: Sequence[ItemSet]) -> dict[tuple[str, ...], Fraction]:
    return {s.items: s.support for s in itemsets}
