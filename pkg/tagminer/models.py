from datetime import date, datetime
from enum import Enum
from fractions import Fraction
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Self

FORBIDDEN_ITEM_CHARS = (",", "\n", "\r")
WEEKDAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
LEXICON_FORMAT_VERSION = 1


def _check_item(item: str) -> str:
    if not item:
        raise ValueError("empty item")
    if any(ch in item for ch in FORBIDDEN_ITEM_CHARS):
        raise ValueError(f"item {item!r} contains a comma or newline")
    return item


class Category(str, Enum):
    WEED = "weed"
    COUGH_SYRUP = "cough_syrup"
    PILLS = "pills"
    GENERAL = "general"


# Categories a post can be assigned to; general only signals "drug related"
DRUG_CATEGORIES = (Category.WEED, Category.COUGH_SYRUP, Category.PILLS)


class Source(str, Enum):
    SEED = "seed"
    MINED = "mined"


class ReviewStatus(str, Enum):
    PENDING = "pending"
    APPROVED = "approved"
    REJECTED = "rejected"


class Record(BaseModel):
    model_config = ConfigDict(frozen=True)


# Corpus


class PostRecord(Record):
    id: str
    author: str
    taken_at: int = Field(ge=0)
    tags: frozenset[str] = frozenset()
    caption: str | None = None

    @field_validator("tags")
    @classmethod
    def _tags_are_normalized(cls, tags: frozenset[str]) -> frozenset[str]:
        for tag in tags:
            _check_item(tag)
            if tag.startswith("#"):
                raise ValueError(f"tag {tag!r} keeps its '#' prefix")
        return tags


class FollowRecord(Record):
    user: str
    follows: frozenset[str] = Field(min_length=1)

    @field_validator("follows")
    @classmethod
    def _accounts_are_items(cls, follows: frozenset[str]) -> frozenset[str]:
        for account in follows:
            _check_item(account)
        return follows


class Transaction(Record):
    items: frozenset[str] = Field(min_length=1)

    @field_validator("items")
    @classmethod
    def _items_are_csv_safe(cls, items: frozenset[str]) -> frozenset[str]:
        for item in items:
            _check_item(item)
        return items

    def sorted_items(self) -> tuple[str, ...]:
        return tuple(sorted(self.items))


# Mining


class MinerConfig(Record):
    min_support: float = Field(gt=0, le=1)
    min_confidence: float = Field(default=0.6, gt=0, le=1)
    max_itemset_size: int | None = Field(default=None, ge=1)
    # transaction partitions counted independently, merged by integer addition
    partitions: int = Field(default=1, ge=1)


class ItemSet(Record):
    items: tuple[str, ...] = Field(min_length=1)
    count: int = Field(ge=0)
    total: int = Field(ge=1)

    @field_validator("items")
    @classmethod
    def _items_are_canonical(cls, items: tuple[str, ...]) -> tuple[str, ...]:
        if list(items) != sorted(set(items)):
            raise ValueError(f"itemset {items!r} is not sorted and duplicate free")
        return items

    @model_validator(mode="after")
    def _count_within_total(self) -> Self:
        if self.count > self.total:
            raise ValueError("itemset count exceeds the transaction total")
        return self

    @property
    def support(self) -> Fraction:
        return Fraction(self.count, self.total)

    def __len__(self) -> int:
        return len(self.items)


class ItemSetCounts(Record):
    transactions: int = Field(ge=0)
    # comma-joined canonical itemset -> transactions containing it
    counts: dict[str, int] = {}


class AssociationRule(Record):
    antecedent: tuple[str, ...] = Field(min_length=1)
    consequent: tuple[str, ...] = Field(min_length=1)
    # transactions containing antecedent and consequent together
    count: int = Field(ge=1)
    antecedent_count: int = Field(ge=1)
    total: int = Field(ge=1)

    @model_validator(mode="after")
    def _sides_are_disjoint(self) -> Self:
        if set(self.antecedent) & set(self.consequent):
            raise ValueError("antecedent and consequent overlap")
        if self.count > self.antecedent_count:
            raise ValueError("rule count exceeds its antecedent count")
        return self

    @property
    def support(self) -> Fraction:
        return Fraction(self.count, self.total)

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.count, self.antecedent_count)


# Lexicon


class LexiconEntry(Record):
    category: Category
    source: Source
    added_version: int = Field(ge=1)


class Lexicon(Record):
    version: int = Field(default=1, ge=1)
    entries: dict[str, LexiconEntry] = {}

    @model_validator(mode="after")
    def _entries_are_normalized_and_not_from_the_future(self) -> Self:
        # corpus imports this module
        from tagminer.corpus import normalize_tag

        for term, entry in self.entries.items():
            _check_item(term)
            if normalize_tag(term) != term:
                raise ValueError(f"term {term!r} is not a normalized tag")
            if entry.added_version > self.version:
                raise ValueError(
                    f"term {term!r} added in version {entry.added_version} "
                    f"of a version {self.version} lexicon"
                )
        return self

    def __contains__(self, term: object) -> bool:
        return term in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def terms(self) -> frozenset[str]:
        return frozenset(self.entries)

    def category_of(self, term: str) -> Category:
        return self.entries[term].category


class CandidateTerm(Record):
    term: str
    support: float = Field(ge=0, le=1)
    evidence: tuple[tuple[str, ...], ...] = ()
    status: ReviewStatus = ReviewStatus.PENDING
    proposed_category: Category | None = None
    decided_at: datetime | None = None


class ReviewDecision(Record):
    action: Literal["approve", "reject"]
    category: Category | None = None

    @model_validator(mode="after")
    def _approval_needs_category(self) -> Self:
        if self.action == "approve" and self.category is None:
            raise ValueError("an approval needs a category")
        return self


# Screening


class ScreenResult(Record):
    post_id: str
    matched_terms: frozenset[str]
    drug_related: bool


class CategoryAssignment(Record):
    post_id: str
    category: Category | None = None


class ScreenedPost(Record):
    post_id: str
    taken_at: int = Field(ge=0)
    matched_terms: frozenset[str]
    drug_related: bool
    category: Category | None = None


# Temporal


class HourHistogram(Record):
    bins: tuple[int, ...] = Field(min_length=24, max_length=24)

    @property
    def total(self) -> int:
        return sum(self.bins)


class WeekdayHistogram(Record):
    bins: tuple[int, ...] = Field(min_length=7, max_length=7)

    @property
    def total(self) -> int:
        return sum(self.bins)


class CategoryShares(Record):
    counts: dict[Category, int]
    shares: dict[Category, float]


class SurveyComparison(Record):
    category: Category
    mined: float
    survey: float

    @property
    def difference(self) -> float:
        return self.mined - self.survey


class TimeProfile(Record):
    label: str
    posts: int
    hours: HourHistogram
    weekdays: WeekdayHistogram
    hour_peaks: list[int]
    weekday_peak: int | None


class TemporalReport(Record):
    profiles: list[TimeProfile]
    shares: CategoryShares | None = None
    survey: list[SurveyComparison] = []


# Interests


class AccountSupport(Record):
    account: str
    count: int
    total: int

    @property
    def support(self) -> Fraction:
        return Fraction(self.count, self.total)


class InterestReport(Record):
    users: int
    top_accounts: list[AccountSupport]
    rules: list[AssociationRule]


# Synthetic corpus generation

Weight = Annotated[float, Field(ge=0)]


class PlantedTerm(Record):
    term: str
    support: float = Field(ge=0, le=1)
    # lexicon terms added alongside the planted term
    companions: tuple[str, ...] = ()


class FollowAccount(Record):
    name: str
    popularity: float = Field(ge=0, le=1)
    # accounts every follower of this one also follows
    implies: tuple[str, ...] = ()


class CoFollow(Record):
    given: tuple[str, ...] = Field(min_length=1)
    also: tuple[str, ...] = Field(min_length=1)
    # exact share of users following every `given` account who also follow `also`
    rate: float = Field(ge=0, le=1)


def _check_weights(weights: tuple[float, ...] | list[float], what: str) -> None:
    if sum(weights) <= 0:
        raise ValueError(f"{what} must not all be zero")


class GenerationSpec(Record):
    n_posts: int = Field(default=10_000, ge=0)
    category_weights: dict[Category, Weight] = {
        Category.WEED: 72,
        Category.PILLS: 14,
        Category.COUGH_SYRUP: 13,
    }
    vocabularies: dict[Category, tuple[str, ...]] = {
        Category.WEED: (
            "weed", "kush", "stonernation", "weedstagram", "marijuana",
            "cannabis", "420", "dank", "blaze", "ganja",
        ),
        Category.COUGH_SYRUP: (
            "lean", "purpledrank", "sizzurp", "dirtysprite", "codeine",
            "actavis", "drank", "syrup",
        ),
        Category.PILLS: (
            "xanax", "percocet", "vicodin", "oxy", "xanaxbars",
            "pills", "perc", "adderall",
        ),
        Category.GENERAL: ("drugs", "high", "stoned", "dope", "plug"),
    }
    filler_tags: tuple[str, ...] = (
        "goodtime", "sunset", "love", "instagood", "friends",
        "party", "music", "tbt", "weekend", "photooftheday",
    )
    min_category_tags: int = Field(default=2, ge=1)
    max_category_tags: int = Field(default=4, ge=1)
    general_tag_rate: float = Field(default=0.3, ge=0, le=1)
    max_filler_tags: int = Field(default=3, ge=0)
    # probability a post also carries one term from another drug category
    cross_category_rate: float = Field(default=0.05, ge=0, le=1)
    hour_weights: tuple[Weight, ...] = Field(
        default=(
            2, 1, 1, 1, 1, 1, 1, 2, 2, 3, 3, 3,
            4, 4, 4, 5, 12, 6, 6, 7, 8, 11, 7, 4,
        ),
        min_length=24,
        max_length=24,
    )
    # Monday first; Thursday highest and Friday above the weekend
    weekday_weights: tuple[Weight, ...] = Field(
        default=(10, 10, 11, 16, 13, 11, 10), min_length=7, max_length=7
    )
    start_date: date = date(2016, 1, 4)
    n_weeks: int = Field(default=52, ge=1)
    planted_terms: tuple[PlantedTerm, ...] = (
        PlantedTerm(term="poup", support=0.25, companions=("high",)),
        PlantedTerm(term="faded", support=0.15, companions=("stoned",)),
        PlantedTerm(term="highsociety", support=0.10),
    )
    n_users: int = Field(default=100, ge=0)
    min_follows: int = Field(default=3, ge=1)
    follow_accounts: tuple[FollowAccount, ...] = (
        FollowAccount(name="hightimesmagazine", popularity=0.15),
        FollowAccount(name="elboglass", popularity=0.13),
        FollowAccount(name="saltglass", popularity=0.11),
        FollowAccount(name="weedhumor", popularity=0.10),
        FollowAccount(
            name="cheechandchong",
            popularity=0.12,
            implies=("heytommychong", "hightimesmagazine"),
        ),
        FollowAccount(name="heytommychong", popularity=0.05),
        FollowAccount(name="christucker", popularity=0.07),
        FollowAccount(name="therock", popularity=0.09),
        FollowAccount(name="sdryno", popularity=0.12, implies=("coylecondenser",)),
        FollowAccount(name="coylecondenser", popularity=0.04),
        FollowAccount(name="oilbrothers", popularity=0.06),
        FollowAccount(name="elksthattrun", popularity=0.06),
    )
    co_follows: tuple[CoFollow, ...] = (
        CoFollow(
            given=("coylecondenser", "sdryno"),
            also=("elksthattrun", "oilbrothers"),
            rate=0.6,
        ),
    )
    filler_accounts: int = Field(default=200, ge=0)

    @field_validator("hour_weights", "weekday_weights")
    @classmethod
    def _weights_not_all_zero(cls, weights: tuple[float, ...]) -> tuple[float, ...]:
        _check_weights(weights, "time weights")
        return weights

    @model_validator(mode="after")
    def _check_spec(self) -> Self:
        if self.min_category_tags > self.max_category_tags:
            raise ValueError("min_category_tags exceeds max_category_tags")
        if Category.GENERAL in self.category_weights:
            raise ValueError("posts are drawn from drug categories only")
        _check_weights(list(self.category_weights.values()), "category weights")
        for category, weight in self.category_weights.items():
            vocabulary = self.vocabularies.get(category, ())
            if weight > 0 and len(vocabulary) < self.max_category_tags:
                raise ValueError(
                    f"vocabulary of {category.value} is smaller than max_category_tags"
                )
        seen: set[str] = set()
        for vocabulary in self.vocabularies.values():
            overlap = seen & set(vocabulary)
            if overlap:
                raise ValueError(f"terms in more than one vocabulary: {sorted(overlap)}")
            seen.update(vocabulary)
        if self.start_date.weekday() != 0:
            raise ValueError("start_date must be a Monday")
        return self
