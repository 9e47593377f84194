import logging
from collections import Counter
from collections.abc import Sequence

from tagminer.core.errors import RejectedTagError
from tagminer.corpus import normalize_account
from tagminer.miner import association_rules, frequent_itemsets, rule_to_line
from tagminer.models import (
    AccountSupport,
    AssociationRule,
    FollowRecord,
    InterestReport,
    MinerConfig,
    Transaction,
)
from tagminer.utils import format_decimal, render_report_template

logger = logging.getLogger(__name__)


def follows_to_transactions(records: Sequence[FollowRecord]) -> list[Transaction]:
    transactions = []
    for record in records:
        accounts = set()
        for account in record.follows:
            try:
                accounts.add(normalize_account(account))
            except RejectedTagError:
                continue
        if accounts:
            transactions.append(Transaction(items=frozenset(accounts)))
    return transactions


def top_followed(tx: Sequence[Transaction], k: int) -> list[AccountSupport]:
    """Accounts by share of users following them, ties lexicographic."""
    if k < 1:
        raise ValueError("k must be at least 1")
    counts = Counter(account for t in tx for account in t.items)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return [AccountSupport(account=a, count=n, total=len(tx)) for a, n in ranked]


def interest_rules(tx: Sequence[Transaction], cfg: MinerConfig) -> list[AssociationRule]:
    return association_rules(frequent_itemsets(tx, cfg), cfg)


def build_interest_report(
    records: Sequence[FollowRecord], cfg: MinerConfig, top: int
) -> InterestReport:
    tx = follows_to_transactions(records)
    report = InterestReport(
        users=len(tx), top_accounts=top_followed(tx, top), rules=interest_rules(tx, cfg)
    )
    logger.info(
        f"interest report over {report.users} users: {len(report.rules)} rules"
    )
    return report


def render_interest_report(report: InterestReport, cfg: MinerConfig) -> str:
    return render_report_template(
        template_name="interests_report.txt",
        context={
            "report": report,
            "cfg": cfg,
            "top_rows": [
                f"{row.account}|{format_decimal(row.support)}" for row in report.top_accounts
            ],
            "rule_rows": [rule_to_line(rule) for rule in report.rules],
        },
    )
