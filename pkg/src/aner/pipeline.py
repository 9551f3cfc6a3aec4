"""End-to-end path from raw text to entity spans.

``NerPipeline`` wires the stages together: romanized-text
normalization, sub-word tokenization, token classification, argmax
decoding, projection back to words, and BIO span extraction. It
follows the scikit-learn estimator conventions (constructor params
stored verbatim, ``fit`` returning self, ``predict`` over a batch), so
it composes with that ecosystem's tooling. ``PipelineConfig`` is the
declarative counterpart used by the service and CLI to build pipelines
from plain settings.

A constructed pipeline is immutable and safe to share across threads
as long as its classifier is (all built-in backends are).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .arabizi import (
    ExternalTransliterator,
    Transliterator,
    WordProvenance,
    process_pipeline_front,
)
from .classify import (
    GazetteerClassifier,
    MockHashClassifier,
    TokenClassifier,
    load_external_model,
    load_gazetteer,
    scores_to_tags,
)
from .errors import PipelineConfigError
from .tags import AnnotatedSentence, EntitySpan, LabelInventory, build_label_inventory, decode_spans
from .tokenization import (
    AlignmentApproach,
    OverflowPolicy,
    TokenizedSequence,
    TokenizerConfig,
    Vocabulary,
    align_labels,
    encode_sentence,
    load_vocabulary,
    merge_window_tags,
    project_to_words,
)
from .validation import check_text, check_texts

_DATA_DIR = Path(__file__).parent / "data"
DEMO_VOCABULARY_PATH = _DATA_DIR / "demo_vocab.txt"
DEMO_CLASSES_PATH = _DATA_DIR / "demo_classes.txt"
DEMO_GAZETTEER_PATH = _DATA_DIR / "demo_gazetteer.tsv"

CLASSIFIER_KINDS = ("mock", "gazetteer")


@dataclass(frozen=True)
class NerResult:
    """Everything one annotation run produced.

    Span character offsets index into ``normalized_text`` (the
    all-Arabic form), not the raw input; ``words`` links the two.
    """

    input_text: str
    normalized_text: str
    spans: tuple[EntitySpan, ...]
    words: tuple[WordProvenance, ...]
    model_id: str
    elapsed_ms: float


class NerPipeline(BaseEstimator):
    """Raw text in, entity spans out.

    ``classifier`` decides the labels; ``vocabulary`` and
    ``tokenizer_config`` shape the model input; ``transliterator``
    (None means the local rule table) handles romanized words;
    ``alignment`` picks how word tags spread over sub-tokens when
    preparing labeled sequences. There is nothing to learn at this
    level, so ``fit`` only returns self.
    """

    def __init__(
        self,
        classifier: TokenClassifier,
        vocabulary: Vocabulary,
        tokenizer_config: TokenizerConfig | None = None,
        transliterator: Transliterator | None = None,
        alignment: AlignmentApproach = AlignmentApproach.ALL_SUBTOKENS,
        model_id: str = "aner",
    ):
        self.classifier = classifier
        self.vocabulary = vocabulary
        self.tokenizer_config = tokenizer_config
        self.transliterator = transliterator
        self.alignment = alignment
        self.model_id = model_id

    @property
    def inventory(self) -> LabelInventory:
        return self.classifier.inventory

    def _config(self) -> TokenizerConfig:
        return self.tokenizer_config or TokenizerConfig()

    def fit(self, X=None, y=None) -> "NerPipeline":
        return self

    def annotate(self, text: str) -> NerResult:
        """Run the full pipeline on one text."""
        check_text(text)
        started = time.perf_counter()
        front = process_pipeline_front(text, self.transliterator)
        if not front.text:
            return NerResult(
                input_text=text, normalized_text="", spans=(), words=front.words,
                model_id=self.model_id,
                elapsed_ms=(time.perf_counter() - started) * 1000.0,
            )
        words = front.text.split(" ")
        sequences = encode_sentence(self.vocabulary, self._config(), words)
        tags_per_sequence = [
            scores_to_tags(self.classifier.scores(s), self.inventory) for s in sequences
        ]
        if len(sequences) == 1:
            word_tags = project_to_words(sequences[0], tags_per_sequence[0])
        else:
            word_tags = merge_window_tags(sequences, tags_per_sequence)
        sentence = AnnotatedSentence.from_words(words, word_tags)
        return NerResult(
            input_text=text,
            normalized_text=sentence.text,
            spans=tuple(decode_spans(sentence)),
            words=front.words,
            model_id=self.model_id,
            elapsed_ms=(time.perf_counter() - started) * 1000.0,
        )

    def predict(self, X: Sequence[str]) -> list[tuple[EntitySpan, ...]]:
        """Entity spans for each text in the batch."""
        check_texts(X)
        return [self.annotate(text).spans for text in X]

    def encode_with_labels(self, sentence: AnnotatedSentence) -> list[TokenizedSequence]:
        """Model-ready sequences for a gold sentence, labels attached.

        This is where the alignment approach matters: it controls what
        continuation pieces are labeled with.
        """
        sequences = encode_sentence(self.vocabulary, self._config(), sentence.words)
        return [
            align_labels(s, sentence.tags, self.inventory, self.alignment)
            for s in sequences
        ]


class ArabiziTransliterator(BaseEstimator, TransformerMixin):
    """Batch text normalizer with the transformer interface.

    ``transform`` maps each input string to its all-Arabic form (the
    pipeline front half). Stateless; ``fit`` only returns self.
    """

    def __init__(self, transliterator: Transliterator | None = None):
        self.transliterator = transliterator

    def fit(self, X=None, y=None) -> "ArabiziTransliterator":
        return self

    def transform(self, X: Sequence[str]) -> list[str]:
        check_texts(X)
        return [process_pipeline_front(text, self.transliterator).text for text in X]


@dataclass(frozen=True)
class PipelineConfig:
    """Declarative pipeline selection, as used by the service and CLI.

    ``classifier`` is ``"mock"``, ``"gazetteer"``, or a path to an
    external model directory. Path fields left as None fall back to
    the packaged demo data. ``external_endpoint`` switches romanized
    words to the remote transliteration service (with local fallback);
    None keeps everything offline.
    """

    classifier: str = "gazetteer"
    vocabulary_path: str | None = None
    classes_path: str | None = None
    gazetteer_path: str | None = None
    max_sequence_length: int = 256
    overflow: str = "truncate"
    window_stride: int = 128
    alignment: str = "all"
    external_endpoint: str | None = None
    mock_seed: int = 0
    model_id: str = "aner"

    def __post_init__(self):
        if self.classifier not in CLASSIFIER_KINDS and not Path(self.classifier).exists():
            raise PipelineConfigError(
                f"classifier must be one of {CLASSIFIER_KINDS} or an existing "
                f"model directory, got {self.classifier!r}"
            )
        if self.overflow not in (p.value for p in OverflowPolicy):
            raise PipelineConfigError(f"unknown overflow policy {self.overflow!r}")
        if self.alignment not in (a.value for a in AlignmentApproach):
            raise PipelineConfigError(f"unknown alignment approach {self.alignment!r}")


def _existing(path: str | None, fallback: Path, what: str) -> Path:
    resolved = Path(path) if path else fallback
    if not resolved.is_file():
        raise PipelineConfigError(f"{what} file {resolved} does not exist")
    return resolved


def build_pipeline(config: PipelineConfig) -> NerPipeline:
    """Construct a ready-to-serve pipeline from plain settings.

    All load failures (missing files, malformed weights) surface here,
    at construction, never during requests.
    """
    vocab_path = _existing(config.vocabulary_path, DEMO_VOCABULARY_PATH, "vocabulary")
    vocabulary = load_vocabulary(vocab_path.read_text(encoding="utf-8"))

    classifier: TokenClassifier
    if config.classifier in CLASSIFIER_KINDS:
        classes_path = _existing(config.classes_path, DEMO_CLASSES_PATH, "classes")
        class_names = [
            line.strip()
            for line in classes_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        inventory = build_label_inventory(class_names)
        if config.classifier == "mock":
            classifier = MockHashClassifier(inventory, seed=config.mock_seed)
        else:
            lexicon_path = _existing(config.gazetteer_path, DEMO_GAZETTEER_PATH, "gazetteer")
            classifier = GazetteerClassifier(inventory, load_gazetteer(lexicon_path))
    else:
        classifier = load_external_model(config.classifier)
        if config.classes_path is not None:
            declared = build_label_inventory(
                line.strip()
                for line in Path(config.classes_path).read_text(encoding="utf-8").splitlines()
                if line.strip()
            )
            if declared != classifier.inventory:
                raise PipelineConfigError(
                    "classes file disagrees with the model's own class manifest"
                )

    transliterator = (
        ExternalTransliterator(config.external_endpoint) if config.external_endpoint else None
    )
    return NerPipeline(
        classifier=classifier,
        vocabulary=vocabulary,
        tokenizer_config=TokenizerConfig(
            max_sequence_length=config.max_sequence_length,
            overflow=OverflowPolicy(config.overflow),
            window_stride=config.window_stride,
        ),
        transliterator=transliterator,
        alignment=AlignmentApproach(config.alignment),
        model_id=config.model_id,
    )
