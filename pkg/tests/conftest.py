"""Shared fixtures and random-instance generators for the test suite."""

from __future__ import annotations

import random

import pytest

from aner import (
    AnnotatedSentence,
    Corpus,
    EntitySpan,
    PipelineConfig,
    Tag,
    build_label_inventory,
    build_pipeline,
    load_vocabulary,
    make_span,
)
from aner.pipeline import DEMO_CLASSES_PATH, DEMO_VOCABULARY_PATH
from aner.tags import OUTSIDE

SMALL_CLASSES = ("Person", "Location", "Nation")

ARABIC_LETTERS = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"


@pytest.fixture(scope="session")
def demo_vocabulary():
    return load_vocabulary(DEMO_VOCABULARY_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def demo_inventory():
    classes = [
        line.strip()
        for line in DEMO_CLASSES_PATH.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    return build_label_inventory(classes)


@pytest.fixture(scope="session")
def small_inventory():
    return build_label_inventory(SMALL_CLASSES)


@pytest.fixture(scope="session")
def gazetteer_pipeline():
    return build_pipeline(PipelineConfig(classifier="gazetteer"))


@pytest.fixture(scope="session")
def mock_pipeline():
    return build_pipeline(PipelineConfig(classifier="mock", model_id="mock"))


def random_words(rng: random.Random, n: int) -> list[str]:
    return [f"w{rng.randrange(40)}" for _ in range(n)]


def arabic_word(rng: random.Random, max_len: int = 6) -> str:
    return "".join(
        rng.choice(ARABIC_LETTERS) for _ in range(rng.randrange(1, max_len + 1))
    )


def random_span_set(
    rng: random.Random, words: list[str], classes=SMALL_CLASSES
) -> list[EntitySpan]:
    """Non-overlapping spans over the given words."""
    spans: list[EntitySpan] = []
    i = 0
    while i < len(words):
        if rng.random() < 0.4:
            length = min(rng.randrange(1, 4), len(words) - i)
            spans.append(make_span(words, rng.choice(classes), i, i + length - 1))
            i += length
        else:
            i += 1
    return spans


def random_tags(rng: random.Random, n: int, classes=SMALL_CLASSES) -> list[Tag]:
    """A legal BIO tag sequence of length n."""
    tags: list[Tag] = []
    i = 0
    while i < n:
        if rng.random() < 0.4:
            entity_class = rng.choice(classes)
            tags.append(Tag.begin(entity_class))
            i += 1
            while i < n and rng.random() < 0.5:
                tags.append(Tag.inside(entity_class))
                i += 1
        else:
            tags.append(OUTSIDE)
            i += 1
    return tags


def random_sentence(
    rng: random.Random, max_words: int = 8, classes=SMALL_CLASSES
) -> AnnotatedSentence:
    n = rng.randrange(1, max_words + 1)
    words = random_words(rng, n)
    return AnnotatedSentence.from_words(words, random_tags(rng, n, classes))


def random_corpus(
    rng: random.Random,
    max_sentences: int = 5,
    max_words: int = 8,
    classes=SMALL_CLASSES,
    source_name: str = "",
) -> Corpus:
    sentences = tuple(
        random_sentence(rng, max_words, classes)
        for _ in range(rng.randrange(1, max_sentences + 1))
    )
    return Corpus(sentences, source_name=source_name)


def retagged(rng: random.Random, corpus: Corpus, classes=SMALL_CLASSES) -> Corpus:
    """Same words as ``corpus``, fresh random tags (a fake prediction)."""
    sentences = tuple(
        AnnotatedSentence.from_words(s.words, random_tags(rng, len(s), classes))
        for s in corpus.sentences
    )
    return Corpus(sentences, source_name="predicted")
