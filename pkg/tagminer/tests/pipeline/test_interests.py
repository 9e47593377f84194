from fractions import Fraction

import pytest

from tagminer.interests import (
    build_interest_report,
    follows_to_transactions,
    interest_rules,
    render_interest_report,
    top_followed,
)
from tagminer.miner import association_rules, frequent_itemsets
from tagminer.models import FollowRecord, MinerConfig, PostRecord
from tagminer.tests.utils.utils import transactions


def test_follows_to_transactions() -> None:
    records = [FollowRecord(user="u1", follows=frozenset({"A", "a"}))]
    assert follows_to_transactions(records) == transactions("a")
    assert follows_to_transactions([]) == []


def test_top_followed() -> None:
    ranked = top_followed(transactions("x,y", "x"), 5)
    assert [(r.account, r.support) for r in ranked] == [
        ("x", Fraction(1)),
        ("y", Fraction(1, 2)),
    ]
    tied = top_followed(transactions("y", "x"), 1)
    assert [(r.account, r.support) for r in tied] == [("x", Fraction(1, 2))]
    with pytest.raises(ValueError):
        top_followed(transactions("x"), 0)


def test_top_followed_agrees_with_miner(
    synthetic_corpus: tuple[list[PostRecord], list[FollowRecord]],
) -> None:
    _, follows = synthetic_corpus
    tx = follows_to_transactions(follows)
    assert len(tx) == 100
    singles = {
        s.items[0]: s.support
        for s in frequent_itemsets(tx, MinerConfig(min_support=0.01, max_itemset_size=1))
    }
    for row in top_followed(tx, 10):
        assert singles[row.account] == row.support


def test_interest_rules_delegate_to_miner() -> None:
    tx = transactions("a,b,c", "a,b,c", "a,b,c")
    cfg = MinerConfig(min_support=0.5, min_confidence=0.6)
    rules = interest_rules(tx, cfg)
    assert rules == association_rules(frequent_itemsets(tx, cfg), cfg)
    a_rule = [r for r in rules if r.antecedent == ("a",) and r.consequent == ("b", "c")]
    assert a_rule[0].confidence == 1


def test_interest_report(
    synthetic_corpus: tuple[list[PostRecord], list[FollowRecord]],
) -> None:
    _, follows = synthetic_corpus
    cfg = MinerConfig(min_support=0.03, min_confidence=0.6)
    report = build_interest_report(follows, cfg, 10)
    assert report.users == 100
    assert len(report.top_accounts) == 10
    chong = [r for r in report.rules if r.antecedent == ("cheechandchong",)]
    assert any(
        r.consequent == ("heytommychong", "hightimesmagazine") and r.confidence == 1
        for r in chong
    )
    two_to_two = [
        r
        for r in report.rules
        if r.antecedent == ("coylecondenser", "sdryno")
        and r.consequent == ("elksthattrun", "oilbrothers")
    ]
    assert len(two_to_two) == 1
    assert 0.6 <= two_to_two[0].confidence < 0.9

    text = render_interest_report(report, cfg)
    top = report.top_accounts[0]
    assert f"{top.account}|{float(top.support):.6f}" in text
    assert "cheechandchong=>heytommychong,hightimesmagazine|" in text


def test_interest_report_without_rules() -> None:
    records = [
        FollowRecord(user="u1", follows=frozenset({"a"})),
        FollowRecord(user="u2", follows=frozenset({"b"})),
    ]
    cfg = MinerConfig(min_support=0.5, min_confidence=0.6)
    report = build_interest_report(records, cfg, 10)
    assert report.rules == []
    assert "no rule reaches the confidence threshold" in render_interest_report(report, cfg)
