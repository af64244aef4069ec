import pytest

from noteroute.corpus.generate import GenerationConfig, generate_corpus
from noteroute.corpus.personas import builtin_profiles
from noteroute.evaluation.split import SplitSpec, labeled_corpus, run_split_eval
from noteroute.model import parse_note
from noteroute.router.features import FeatureSpec
from noteroute.router.train import HyperParams

SAMPLE_TEXT = (
    "[2023-08-14][19:45][Navy Pier, Chicago][iPhone 15][Clear skies, 32°C] "
    "I took a long walk by the lake after work today. The sunset was calming, "
    "and it helped me reflect on my goals for the week. I realize I need to "
    "prioritize creative projects that bring me a sense of purpose, rather "
    "than getting lost in routine tasks."
)


@pytest.fixture(scope="session")
def sample_note():
    return parse_note(SAMPLE_TEXT, "INFP", note_id="sample-0001")


@pytest.fixture(scope="session")
def template_corpus():
    cfg = GenerationConfig(seed=0, notes_per_persona=(10, 30))
    return generate_corpus(list(builtin_profiles().values()), cfg)


@pytest.fixture(scope="session")
def labeled(template_corpus):
    return labeled_corpus(template_corpus)


@pytest.fixture(scope="session")
def split_result(labeled):
    return run_split_eval(
        labeled,
        split_spec=SplitSpec(seed=0),
        hp=HyperParams(epochs=6),
        spec=FeatureSpec(hash_dims=2**13, use_tfidf=True),
    )


@pytest.fixture(scope="session")
def fixture_model(split_result):
    return split_result.model
