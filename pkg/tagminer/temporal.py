import json
import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from typing import Any, Protocol

from tagminer.core.errors import NoAssignedPostsError
from tagminer.models import (
    DRUG_CATEGORIES,
    WEEKDAY_NAMES,
    Category,
    CategoryShares,
    HourHistogram,
    ScreenedPost,
    SurveyComparison,
    TemporalReport,
    TimeProfile,
    WeekdayHistogram,
)
from tagminer.utils import render_report_template

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86_400
SECONDS_PER_HOUR = 3_600
# 1970-01-01 was a Thursday; index 0 is Monday
EPOCH_WEEKDAY = 3


class Timestamped(Protocol):
    @property
    def taken_at(self) -> int: ...


class Categorized(Protocol):
    @property
    def category(self) -> Category | None: ...


def _timestamps(posts: Iterable[Timestamped]) -> list[int]:
    stamps = [p.taken_at for p in posts]
    if any(t < 0 for t in stamps):
        raise ValueError("taken_at must not be negative")
    return stamps


def _bins(keys: Iterable[int], size: int) -> tuple[int, ...]:
    counts = Counter(keys)
    return tuple(counts.get(i, 0) for i in range(size))


def hour_histogram(posts: Iterable[Timestamped]) -> HourHistogram:
    """UTC hour-of-day counts; no timezone correction is attempted."""
    hours = (t % SECONDS_PER_DAY // SECONDS_PER_HOUR for t in _timestamps(posts))
    return HourHistogram(bins=_bins(hours, 24))


def weekday_histogram(posts: Iterable[Timestamped]) -> WeekdayHistogram:
    weekdays = ((t // SECONDS_PER_DAY + EPOCH_WEEKDAY) % 7 for t in _timestamps(posts))
    return WeekdayHistogram(bins=_bins(weekdays, 7))


def category_shares(assignments: Iterable[Categorized]) -> CategoryShares:
    counts = Counter(a.category for a in assignments if a.category is not None)
    total = sum(counts.values())
    if total == 0:
        raise NoAssignedPostsError("no post has an assigned category")
    categories = [*DRUG_CATEGORIES, *sorted(set(counts) - set(DRUG_CATEGORIES))]
    return CategoryShares(
        counts={c: counts.get(c, 0) for c in categories},
        shares={c: float(Fraction(counts.get(c, 0), total)) for c in categories},
    )


def peak_bins(hist: HourHistogram | WeekdayHistogram, k: int) -> list[int]:
    """Indices of the k fullest bins, smaller index first on ties."""
    if k < 1:
        raise ValueError("k must be at least 1")
    order = sorted(range(len(hist.bins)), key=lambda i: (-hist.bins[i], i))
    return order[:k]


def compare_with_survey(
    shares: CategoryShares, survey: Mapping[str, float]
) -> list[SurveyComparison]:
    """Mined shares next to survey proportions rescaled over the same categories."""
    reference = {
        Category(name): float(value)
        for name, value in survey.items()
        if Category(name) in DRUG_CATEGORIES
    }
    scale = sum(reference.values())
    if scale <= 0:
        return []
    return [
        SurveyComparison(
            category=category,
            mined=shares.shares.get(category, 0.0),
            survey=reference[category] / scale,
        )
        for category in DRUG_CATEGORIES
        if category in reference
    ]


def _profile(label: str, rows: Sequence[ScreenedPost]) -> TimeProfile:
    hours = hour_histogram(rows)
    weekdays = weekday_histogram(rows)
    return TimeProfile(
        label=label,
        posts=len(rows),
        hours=hours,
        weekdays=weekdays,
        hour_peaks=peak_bins(hours, 2) if rows else [],
        weekday_peak=peak_bins(weekdays, 1)[0] if rows else None,
    )


def build_temporal_report(
    screened: Sequence[ScreenedPost], survey: Mapping[str, float] | None = None
) -> TemporalReport:
    related = [row for row in screened if row.drug_related]
    profiles = [_profile("all", related)]
    for category in DRUG_CATEGORIES:
        profiles.append(
            _profile(category.value, [row for row in related if row.category == category])
        )
    shares = None
    comparison: list[SurveyComparison] = []
    if any(row.category is not None for row in related):
        shares = category_shares(related)
        if survey:
            comparison = compare_with_survey(shares, survey)
    logger.info(f"temporal report over {len(related)} drug related posts")
    return TemporalReport(profiles=profiles, shares=shares, survey=comparison)


def render_temporal_report(report: TemporalReport) -> str:
    return render_report_template(
        template_name="temporal_report.txt",
        context={"report": report, "weekday_names": WEEKDAY_NAMES},
    )


def temporal_report_to_json(report: TemporalReport) -> str:
    document: dict[str, Any] = {
        "hour_index": "UTC hour of day, 0-23",
        "weekday_index": "UTC weekday, 0=Monday ... 6=Sunday",
        "profiles": [
            {
                "label": p.label,
                "posts": p.posts,
                "hours": list(p.hours.bins),
                "weekdays": list(p.weekdays.bins),
                "hour_peaks": p.hour_peaks,
                "weekday_peak": p.weekday_peak,
            }
            for p in report.profiles
        ],
        "category_counts": (
            {c.value: n for c, n in report.shares.counts.items()} if report.shares else {}
        ),
        "survey": [
            {"category": row.category.value, "mined": row.mined, "survey": row.survey}
            for row in report.survey
        ],
    }
    return json.dumps(document, indent=2) + "\n"
