import pytest

from tagminer.models import Category, FollowRecord, GenerationSpec, Lexicon, PostRecord
from tagminer.synth import gen_synthetic_corpus, synthetic_lexicon
from tagminer.tests.utils.post import make_lexicon


@pytest.fixture(scope="session")
def spec() -> GenerationSpec:
    return GenerationSpec()


@pytest.fixture(scope="session")
def synthetic_corpus(
    spec: GenerationSpec,
) -> tuple[list[PostRecord], list[FollowRecord]]:
    return gen_synthetic_corpus(1, spec)


@pytest.fixture(scope="session")
def seed_lexicon(spec: GenerationSpec) -> Lexicon:
    return synthetic_lexicon(spec)


@pytest.fixture()
def lexicon() -> Lexicon:
    return make_lexicon(
        {
            "weed": Category.WEED,
            "kush": Category.WEED,
            "dank": Category.WEED,
            "ganja": Category.WEED,
            "blaze": Category.WEED,
            "lean": Category.COUGH_SYRUP,
            "xanax": Category.PILLS,
            "drugs": Category.GENERAL,
        }
    )
