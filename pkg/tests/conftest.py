import pytest

from triagekit.corpus import SyntheticSpec, generate_synthetic
from triagekit.textprep import StopwordList, rainbow_stopwords


@pytest.fixture(scope="session")
def stopwords():
    return rainbow_stopwords()


@pytest.fixture(scope="session")
def tiny_stopwords():
    return StopwordList(frozenset({"the", "and", "with", "for"}))


@pytest.fixture(scope="session")
def small_clean_corpus():
    """Noise-free corpus, 30 issues per sub-team: fully separable."""
    spec = SyntheticSpec(
        counts={st: 30 for st in ("ST1", "ST2", "ST3", "ST4", "ST5", "ST6")},
        noise_rate=0.0,
    )
    return generate_synthetic(spec, seed=101)


@pytest.fixture(scope="session")
def small_noisy_corpus():
    spec = SyntheticSpec(
        counts={"ST1": 24, "ST2": 18, "ST3": 12, "ST4": 30, "ST5": 24, "ST6": 12},
        noise_rate=0.3,
    )
    return generate_synthetic(spec, seed=77)
