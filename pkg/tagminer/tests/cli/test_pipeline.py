import json
from pathlib import Path

import pytest

from tagminer.cli.main import run
from tagminer.lexicon import load_lexicon, load_queue
from tagminer.models import Category, ReviewStatus, Source


def stage(*argv: object) -> None:
    assert run([str(arg) for arg in argv]) == 0


def run_pipeline(out: Path, partitions: int = 1) -> None:
    out.mkdir()
    stage(
        "synth", "--seed", 1, "--n-posts", 4000,
        "--out-posts", out / "posts.jsonl",
        "--out-follows", out / "follows.jsonl",
        "--out-lexicon", out / "lexicon.json",
    )
    stage("seed-lexicon", "--posts", out / "posts.jsonl", "--k", 20, "--out", out / "seeded.json")
    stage(
        "screen", "--posts", out / "posts.jsonl", "--lexicon", out / "lexicon.json",
        "--out", out / "screened.jsonl",
    )
    stage(
        "mine", "--posts", out / "posts.jsonl", "--out-tx", out / "tx.csv",
        "--min-support", 0.05, "--max-size", 3, "--partitions", partitions,
        "--out", out / "sets.txt",
    )
    stage("rules", "--sets", out / "sets.txt", "--min-confidence", 0.6, "--out", out / "rules.txt")
    stage(
        "expand", "--sets", out / "sets.txt", "--lexicon", out / "lexicon.json",
        "--min-support", 0.2, "--queue", out / "queue.jsonl",
    )
    stage("temporal", "--screened", out / "screened.jsonl", "--out", out / "temporal.txt")
    stage(
        "interests", "--follows", out / "follows.jsonl", "--min-support", 0.05,
        "--top", 10, "--out", out / "interests.txt",
    )


ARTIFACTS = (
    "posts.jsonl",
    "follows.jsonl",
    "lexicon.json",
    "seeded.json",
    "screened.jsonl",
    "tx.csv",
    "sets.txt",
    "sets.counts.json",
    "rules.txt",
    "queue.jsonl",
    "temporal.txt",
    "temporal.json",
    "interests.txt",
)


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("pipeline") / "run"
    run_pipeline(out)
    return out


def test_pipeline_is_reproducible(pipeline_dir: Path, tmp_path: Path) -> None:
    again = tmp_path / "again"
    run_pipeline(again, partitions=2)
    for name in ARTIFACTS:
        assert (pipeline_dir / name).read_bytes() == (again / name).read_bytes(), name


def test_expand_queues_planted_term(pipeline_dir: Path) -> None:
    queue = load_queue(pipeline_dir / "queue.jsonl")
    terms = [c.term for c in queue]
    assert "poup" in terms
    assert "faded" not in terms
    assert all(c.status == ReviewStatus.PENDING for c in queue)


def test_review_updates_lexicon_and_screening(pipeline_dir: Path, tmp_path: Path) -> None:
    for name in ("posts.jsonl", "lexicon.json", "queue.jsonl"):
        (tmp_path / name).write_bytes((pipeline_dir / name).read_bytes())
    lexicon, queue = tmp_path / "lexicon.json", tmp_path / "queue.jsonl"

    stage("review", "--queue", queue, "--lexicon", lexicon, "--approve", "poup=cough_syrup")
    updated = load_lexicon(lexicon)
    assert updated.version == 2
    assert updated.entries["poup"].source == Source.MINED
    assert updated.category_of("poup") == Category.COUGH_SYRUP
    decided = {c.term: c for c in load_queue(queue)}["poup"]
    assert decided.status == ReviewStatus.APPROVED
    assert decided.decided_at is not None

    # a second approval of the same term conflicts
    argv = ["review", "--queue", queue, "--lexicon", lexicon, "--approve", "poup=weed"]
    assert run([str(arg) for arg in argv]) == 2

    stage("screen", "--posts", tmp_path / "posts.jsonl", "--lexicon", lexicon, "--out", tmp_path / "s.jsonl")
    rows = [json.loads(line) for line in (tmp_path / "s.jsonl").read_text().splitlines()]
    assert any("poup" in row["matched_terms"] for row in rows)


def test_review_lists_pending(pipeline_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
    queue_before = (pipeline_dir / "queue.jsonl").read_bytes()
    stage("review", "--queue", pipeline_dir / "queue.jsonl", "--lexicon", pipeline_dir / "lexicon.json")
    assert capsys.readouterr().out.startswith("poup|")
    assert (pipeline_dir / "queue.jsonl").read_bytes() == queue_before


def test_reports(pipeline_dir: Path) -> None:
    temporal = json.loads((pipeline_dir / "temporal.json").read_text())
    everything = temporal["profiles"][0]
    assert everything["label"] == "all"
    assert set(everything["hour_peaks"]) == {16, 21}
    assert everything["weekday_peak"] == 3

    sets = (pipeline_dir / "sets.txt").read_text().splitlines()
    assert all(line.count("|") == 1 for line in sets)
    counts = json.loads((pipeline_dir / "sets.counts.json").read_text())
    assert counts["transactions"] == 4000
    assert (pipeline_dir / "tx.csv").read_text().count("\n") == 4000

    interests = (pipeline_dir / "interests.txt").read_text()
    assert "# Common interests of 100 accounts" in interests
