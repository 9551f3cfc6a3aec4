"""CoNLL corpus reading/writing, statistics, and deterministic splits.

The on-disk format is line-oriented UTF-8: one ``token<whitespace>tag``
pair per line, sentences separated by blank lines, comment lines
starting with ``#`` ignored. Files in the wild often carry extra middle
columns (POS and the like), so the tag is taken from the last
whitespace-separated field and the token from the first.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ConllParseError, SplitSpecError, TagSequenceError
from .tags import AnnotatedSentence, Tag, TagKind, decode_spans, repair_tag_sequence

Rational = Union[int, float, str, Fraction]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[AnnotatedSentence, ...]
    source_name: str = ""

    def __post_init__(self):
        for i, sentence in enumerate(self.sentences):
            if len(sentence) == 0:
                raise TagSequenceError(f"sentence {i} is empty")

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def classes(self) -> tuple[str, ...]:
        """Entity classes appearing in the corpus, in first-seen order."""
        seen: dict[str, None] = {}
        for sentence in self.sentences:
            for tag in sentence.tags:
                if tag.entity_class is not None:
                    seen.setdefault(tag.entity_class)
        return tuple(seen)


def _as_fraction(value: Rational) -> Fraction:
    # Floats go through their decimal repr so 0.8 means 4/5, not the
    # nearest binary float.
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class SplitSpec:
    """Train/eval/test fractions (must sum to exactly 1) plus a shuffle seed."""

    train_fraction: Fraction
    eval_fraction: Fraction
    test_fraction: Fraction
    seed: int = 0

    @staticmethod
    def of(train: Rational, eval: Rational, test: Rational, seed: int = 0) -> "SplitSpec":
        return SplitSpec(_as_fraction(train), _as_fraction(eval), _as_fraction(test), seed)

    def __post_init__(self):
        fractions = (self.train_fraction, self.eval_fraction, self.test_fraction)
        for value in fractions:
            if not isinstance(value, Fraction):
                raise SplitSpecError(f"fractions must be Fraction, got {value!r}; use SplitSpec.of")
            if value < 0:
                raise SplitSpecError(f"fractions must be non-negative, got {value}")
        if sum(fractions) != 1:
            raise SplitSpecError(f"fractions must sum to 1, got {sum(fractions)}")


def read_conll(source: Union[str, Iterable[str]], source_name: str = "") -> Corpus:
    """Parse CoNLL text (a string or an iterable of lines) into a corpus.

    Tags are parsed from their textual forms and repaired into legal BIO
    on the way in; character offsets are synthesized by joining words
    with single spaces (the format does not preserve original spacing).
    """
    lines = source.splitlines() if isinstance(source, str) else source
    sentences: list[AnnotatedSentence] = []
    words: list[str] = []
    tags: list[Tag] = []

    def flush():
        if words:
            sentences.append(AnnotatedSentence.from_words(words, repair_tag_sequence(tags)))
            words.clear()
            tags.clear()

    line_number = 0
    for line_number, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if line.startswith("#"):
            continue
        if not line.strip():
            flush()
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ConllParseError(f"expected 'token tag', got {line!r}", line_number)
        word, tag_text = fields[0], fields[-1]
        try:
            tag = Tag.parse(tag_text)
        except TagSequenceError as exc:
            raise ConllParseError(str(exc), line_number) from None
        if tag.kind is TagKind.IGNORE:
            raise ConllParseError(
                f"tag {tag_text!r} is reserved for sub-token alignment", line_number
            )
        words.append(word)
        tags.append(tag)
    flush()
    return Corpus(tuple(sentences), source_name=source_name)


def write_conll(corpus: Corpus) -> str:
    """Serialize a corpus; each sentence block is followed by one blank line."""
    chunks: list[str] = []
    for sentence in corpus.sentences:
        for word, tag in zip(sentence.words, sentence.tags):
            chunks.append(f"{word} {tag.to_text()}\n")
        chunks.append("\n")
    return "".join(chunks)


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic sentence-level partition: seeded shuffle, contiguous cut.

    Eval and test sizes are floor(fraction * N); the remainder goes to
    train.
    """
    if len(corpus) == 0:
        raise SplitSpecError("cannot split an empty corpus")
    n = len(corpus)
    n_eval = math.floor(spec.eval_fraction * n)
    n_test = math.floor(spec.test_fraction * n)
    n_train = n - n_eval - n_test

    order = list(range(n))
    random.Random(spec.seed).shuffle(order)
    picked = [corpus.sentences[i] for i in order]

    def part(sentences, suffix):
        name = f"{corpus.source_name}:{suffix}" if corpus.source_name else suffix
        return Corpus(tuple(sentences), source_name=name)

    return (
        part(picked[:n_train], "train"),
        part(picked[n_train : n_train + n_eval], "eval"),
        part(picked[n_train + n_eval :], "test"),
    )


def class_histogram(corpus: Corpus) -> dict[str, int]:
    """Count decoded entity spans per class."""
    counts: Counter[str] = Counter()
    for sentence in corpus.sentences:
        for span in decode_spans(sentence):
            counts[span.entity_class] += 1
    return dict(counts)
