"""Arabic/Arabizi named entity recognition: inference, evaluation, serving.

The pieces compose in pipeline order: romanized-text normalization
(``arabizi``), corpus IO (``corpus``), sub-word tokenization and label
alignment (``tokenization``), token classification (``classify``), BIO
span decoding (``tags``), entity-level scoring (``evaluation``), and an
HTTP service (``service``). ``NerPipeline`` ties the inference path
together; the packaged demo vocabulary, classes, and gazetteer make the
whole stack runnable offline out of the box.
"""

from .arabizi import (
    CleanedText,
    ExternalTransliterator,
    FrontResult,
    LocalTransliterator,
    TransliterationBackend,
    TransliterationResult,
    WordClassification,
    WordKind,
    WordProvenance,
    classify_word,
    clean_text,
    load_transliteration_table,
    process_pipeline_front,
    strip_diacritics,
    transliterate_local,
)
from .classify import (
    GazetteerClassifier,
    MockHashClassifier,
    TokenClassifier,
    TokenScoreTableClassifier,
    load_external_model,
    load_gazetteer,
    scores_to_tags,
)
from .corpus import (
    Corpus,
    SplitSpec,
    class_histogram,
    read_conll,
    split,
    write_conll,
)
from .errors import (
    AlignmentError,
    AnerError,
    ClassifierContractError,
    ConllParseError,
    CorpusAlignmentError,
    InventoryError,
    LinkError,
    ModelLoadError,
    PipelineConfigError,
    ServiceConfigError,
    SpanEncodingError,
    SplitSpecError,
    TagSequenceError,
    TransliterationError,
    VocabularyError,
)
from .evaluation import (
    ClassMetrics,
    EvalReport,
    Metrics,
    export_report,
    render_report,
    score,
    score_against_oracle,
)
from .pipeline import (
    ArabiziTransliterator,
    DEMO_CLASSES_PATH,
    DEMO_GAZETTEER_PATH,
    DEMO_VOCABULARY_PATH,
    NerPipeline,
    NerResult,
    PipelineConfig,
    build_pipeline,
)
from .service import (
    ServiceConfig,
    class_color,
    create_app,
    decorate_result,
    serve,
    surface_from_link,
    wikipedia_link,
)
from .tags import (
    IGNORE,
    OUTSIDE,
    AnnotatedSentence,
    EntitySpan,
    LabelInventory,
    Tag,
    TagKind,
    build_label_inventory,
    decode_spans,
    encode_spans,
    make_span,
    repair_tag_sequence,
)
from .tokenization import (
    CONTINUATION_PREFIX,
    PADDING_TOKEN,
    SEQUENCE_END_TOKEN,
    SEQUENCE_START_TOKEN,
    UNKNOWN_TOKEN,
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
    tokenize_word,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentApproach",
    "AlignmentError",
    "AnerError",
    "AnnotatedSentence",
    "ArabiziTransliterator",
    "CONTINUATION_PREFIX",
    "ClassMetrics",
    "ClassifierContractError",
    "CleanedText",
    "ConllParseError",
    "Corpus",
    "CorpusAlignmentError",
    "DEMO_CLASSES_PATH",
    "DEMO_GAZETTEER_PATH",
    "DEMO_VOCABULARY_PATH",
    "EntitySpan",
    "EvalReport",
    "ExternalTransliterator",
    "FrontResult",
    "GazetteerClassifier",
    "IGNORE",
    "InventoryError",
    "LabelInventory",
    "LinkError",
    "LocalTransliterator",
    "Metrics",
    "MockHashClassifier",
    "ModelLoadError",
    "NerPipeline",
    "NerResult",
    "OUTSIDE",
    "OverflowPolicy",
    "PADDING_TOKEN",
    "PipelineConfig",
    "PipelineConfigError",
    "SEQUENCE_END_TOKEN",
    "SEQUENCE_START_TOKEN",
    "ServiceConfig",
    "ServiceConfigError",
    "SpanEncodingError",
    "SplitSpec",
    "SplitSpecError",
    "Tag",
    "TagKind",
    "TagSequenceError",
    "TokenClassifier",
    "TokenScoreTableClassifier",
    "TokenizedSequence",
    "TokenizerConfig",
    "TransliterationBackend",
    "TransliterationError",
    "TransliterationResult",
    "UNKNOWN_TOKEN",
    "Vocabulary",
    "VocabularyError",
    "WordClassification",
    "WordKind",
    "WordProvenance",
    "align_labels",
    "build_label_inventory",
    "build_pipeline",
    "class_color",
    "class_histogram",
    "classify_word",
    "clean_text",
    "create_app",
    "decode_spans",
    "decorate_result",
    "encode_sentence",
    "encode_spans",
    "export_report",
    "load_external_model",
    "load_gazetteer",
    "load_transliteration_table",
    "load_vocabulary",
    "make_span",
    "merge_window_tags",
    "process_pipeline_front",
    "project_to_words",
    "read_conll",
    "render_report",
    "repair_tag_sequence",
    "score",
    "score_against_oracle",
    "scores_to_tags",
    "serve",
    "split",
    "strip_diacritics",
    "surface_from_link",
    "tokenize_word",
    "transliterate_local",
    "wikipedia_link",
    "write_conll",
]
