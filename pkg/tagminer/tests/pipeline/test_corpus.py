import json
from pathlib import Path

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tagminer.core.errors import DataError, ParseError, RejectedTagError
from tagminer.corpus import (
    normalize_account,
    normalize_tag,
    parse_follow_line,
    parse_post_line,
    posts_to_transactions,
    read_follows,
    read_posts,
    read_transactions_csv,
    write_posts,
    write_transactions_csv,
)
from tagminer.tests.utils.post import make_post
from tagminer.tests.utils.utils import random_lower_string, transactions


def test_normalize_tag_strips_hash_and_case() -> None:
    assert normalize_tag("#WeedStagram") == "weedstagram"
    assert normalize_tag("kush") == "kush"


def test_normalize_tag_removes_commas() -> None:
    assert normalize_tag("#Dirty,Sprite") == "dirtysprite"


def test_normalize_tag_compatibility_forms() -> None:
    # fullwidth letters and hash sign
    assert normalize_tag("＃ＬＥＡＮ") == "lean"
    assert normalize_tag("  #Kush\n") == "kush"


@pytest.mark.parametrize("raw", ["", "   ", "#", "##", ",", "#,\n"])
def test_normalize_tag_rejects_empty(raw: str) -> None:
    with pytest.raises(RejectedTagError):
        normalize_tag(raw)


def test_normalize_account() -> None:
    assert normalize_account("@HighTimesMagazine") == "hightimesmagazine"


def test_normalize_lowercase_word_is_identity() -> None:
    word = random_lower_string()
    assert normalize_tag(word) == word
    assert normalize_tag(f"#{word.upper()}") == word


@given(st.text())
def test_normalize_tag_is_idempotent(raw: str) -> None:
    try:
        tag = normalize_tag(raw)
    except RejectedTagError:
        assume(False)
        return
    assert normalize_tag(tag) == tag
    assert tag and not tag.startswith("#")
    assert "," not in tag and "\n" not in tag


def test_parse_post_line_dedups_after_normalization() -> None:
    post = parse_post_line('{"id":"1","user":"u1","taken_at":0,"tags":["#Weed","weed"]}')
    assert post.tags == {"weed"}
    assert post.author == "u1"
    assert post.taken_at == 0


def test_parse_post_line_two_tags() -> None:
    post = parse_post_line(
        '{"id":"2","user":"u2","taken_at":59400,"tags":["kush","stonernation"]}'
    )
    assert post.tags == {"kush", "stonernation"}
    assert post.caption is None


def test_parse_post_line_drops_malformed_tags(caplog: pytest.LogCaptureFixture) -> None:
    post = parse_post_line(
        '{"id":"3","user":"u","taken_at":5,"tags":["#", 7, "lean", "  "]}', 4
    )
    assert post.tags == {"lean"}
    assert "line 4: dropped 3 malformed tags" in caplog.text


@pytest.mark.parametrize(
    "line",
    [
        '{"id":"1","user":"u1","tags":["weed"]}',
        '{"user":"u1","taken_at":1}',
        '{"id":"1","taken_at":1}',
        '{"id":"1","user":"u1","taken_at":-5}',
        '{"id":"1","user":"u1","taken_at":"noon"}',
        '{"id":"1","user":"u1","taken_at":1,"tags":"weed"}',
        "[1, 2]",
        "{not json",
    ],
)
def test_parse_post_line_errors(line: str) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_post_line(line, 7)
    assert excinfo.value.line == 7


def test_parse_follow_line() -> None:
    record = parse_follow_line('{"user":"u1","follows":["A","a","@b"]}')
    assert record.follows == {"a", "b"}


def test_parse_follow_line_follows_nobody() -> None:
    with pytest.raises(ParseError):
        parse_follow_line('{"user":"u1","follows":[]}', 1)


def test_read_posts_reports_path_and_line(tmp_path: Path) -> None:
    path = tmp_path / "posts.jsonl"
    path.write_text(
        '{"id":"1","user":"u","taken_at":0,"tags":["a"]}\n\n{"id":"2","user":"u"}\n',
        encoding="utf-8",
    )
    with pytest.raises(ParseError) as excinfo:
        read_posts(path)
    assert excinfo.value.line == 3
    assert str(path) in str(excinfo.value)


def test_read_missing_file(tmp_path: Path) -> None:
    missing = tmp_path / "missing.jsonl"
    with pytest.raises(DataError, match="missing.jsonl"):
        read_follows(missing)
    with pytest.raises(DataError, match="missing.jsonl"):
        read_transactions_csv(missing)


def test_posts_round_trip(tmp_path: Path) -> None:
    posts = [make_post("weed", "kush", taken_at=59400), make_post("lean")]
    path = tmp_path / "posts.jsonl"
    write_posts(posts, path)
    assert read_posts(path) == posts
    first = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert first["tags"] == ["kush", "weed"]


def test_posts_to_transactions() -> None:
    assert posts_to_transactions([]) == []
    a = make_post("a", "b")
    empty = make_post()
    c = make_post("c")
    assert posts_to_transactions([a, empty, c]) == transactions("a,b", "c")


def test_transactions_csv_format(tmp_path: Path) -> None:
    path = tmp_path / "tx.csv"
    write_transactions_csv(transactions("b,a", "c", "z,a"), path)
    assert path.read_bytes() == b"a,b\nc\na,z\n"
    assert read_transactions_csv(path) == transactions("a,b", "c", "a,z")


def test_transactions_csv_empty(tmp_path: Path) -> None:
    path = tmp_path / "tx.csv"
    write_transactions_csv([], path)
    assert path.read_bytes() == b""
    assert read_transactions_csv(path) == []


@pytest.mark.parametrize("content", ["a,b\n\nc\n", "a,,b\n", "a,b\r\n"])
def test_transactions_csv_malformed_row(tmp_path: Path, content: str) -> None:
    path = tmp_path / "tx.csv"
    path.write_bytes(content.encode())
    with pytest.raises(ParseError, match="row"):
        read_transactions_csv(path)


items = st.text(alphabet="abcdefghé#ß ", min_size=1, max_size=6)


@given(st.lists(st.frozensets(items, min_size=1, max_size=5), max_size=12))
def test_transactions_csv_round_trip(
    tmp_path_factory: pytest.TempPathFactory, rows: list[frozenset[str]]
) -> None:
    tx = posts_to_transactions(
        [make_post(*{normalize_tag(i) for i in row if i.strip(" #")}) for row in rows]
    )
    path = tmp_path_factory.mktemp("csv") / "tx.csv"
    write_transactions_csv(tx, path)
    assert read_transactions_csv(path) == tx


def test_read_transactions_csv_not_utf8(tmp_path: Path) -> None:
    path = tmp_path / "tx.csv"
    path.write_bytes(b"a,b\n\xff\xfe,c\n")
    with pytest.raises(DataError, match="tx.csv: file is not UTF-8"):
        read_transactions_csv(path)
