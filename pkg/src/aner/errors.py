"""Exception hierarchy shared by all aner modules."""


class AnerError(Exception):
    """Base class for all errors raised by this package."""


class InventoryError(AnerError):
    """Invalid entity class set or label inventory construction failure."""


class TagSequenceError(AnerError):
    """A tag sequence violates the contract of the operation it was given to."""


class SpanEncodingError(AnerError):
    """Entity spans cannot be encoded as a tag sequence (overlap, out of bounds)."""


class ConllParseError(AnerError):
    """Malformed CoNLL input. Carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class SplitSpecError(AnerError):
    """Invalid train/eval/test split specification."""


class VocabularyError(AnerError):
    """Invalid vocabulary file (duplicates, missing special tokens)."""


class AlignmentError(AnerError):
    """Label alignment received tags that do not match the tokenized words."""


class TransliterationError(AnerError):
    """Transliteration received input that violates its contract."""


class ClassifierContractError(AnerError):
    """A classifier produced scores that violate the declared contract."""


class ModelLoadError(AnerError):
    """An external model could not be loaded or does not fit the inventory."""


class PipelineConfigError(AnerError):
    """Invalid pipeline configuration (missing paths, bad backend selection)."""


class CorpusAlignmentError(AnerError):
    """Gold and predicted corpora do not line up sentence by sentence."""


class ServiceConfigError(AnerError):
    """Invalid service configuration (no models, bad limits)."""


class LinkError(AnerError):
    """Cannot build a link or color for the given entity."""
