import pytest

from debacer.corpus import select_agenda
from debacer.synth import POLITICAL_STATEMENTS, SynthConfig, generate_synthetic


@pytest.fixture(scope="session")
def synth_default():
    """The Table-1-shaped corpus used across suites (seed 0)."""
    return generate_synthetic(SynthConfig())


@pytest.fixture(scope="session")
def synth_small():
    return generate_synthetic(SynthConfig(n_minutes=4, seed=5))


@pytest.fixture(scope="session")
def moderator_dataset(synth_default):
    """(texts, labels, debaters) for every labeled moderator speech."""
    corpus, truth = synth_default
    speeches = [
        s
        for item in select_agenda(corpus, POLITICAL_STATEMENTS)
        for s in item.speeches
        if s.is_moderator
    ]
    texts = [s.text for s in speeches]
    labels = [truth.labels[s.key] for s in speeches]
    debaters = [s.debater for s in speeches]
    return texts, labels, debaters


@pytest.fixture(scope="session")
def moderator_dataset_small(synth_small):
    corpus, truth = synth_small
    speeches = [
        s
        for item in select_agenda(corpus, POLITICAL_STATEMENTS)
        for s in item.speeches
        if s.is_moderator
    ]
    texts = [s.text for s in speeches]
    labels = [truth.labels[s.key] for s in speeches]
    debaters = [s.debater for s in speeches]
    return texts, labels, debaters
