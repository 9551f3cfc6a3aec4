"""Vocabulary-driven sub-word tokenization with word-alignment tracking.

Words are segmented greedily against a wordpiece-style vocabulary
(longest prefix first, continuation pieces prefixed with ``##``).
Sentences are packed into fixed-length sequences with start/end
specials, and word-level tags can be projected onto sub-tokens and
back using either of two labeling approaches:

* ``ALL_SUBTOKENS``: every piece of a word carries the word's tag;
  continuation pieces of a Begin word carry the Inside tag of the same
  class so that span semantics survive projection.
* ``FIRST_SUBTOKEN_ONLY``: the first piece carries the word's tag and
  the remaining pieces carry the ignore label.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence, Union

from .errors import AlignmentError, VocabularyError
from .tags import IGNORE, OUTSIDE, LabelInventory, Tag, TagKind, repair_tag_sequence
from .validation import check_positive, check_word

UNKNOWN_TOKEN = "[UNK]"
PADDING_TOKEN = "[PAD]"
SEQUENCE_START_TOKEN = "[CLS]"
SEQUENCE_END_TOKEN = "[SEP]"
CONTINUATION_PREFIX = "##"

_REQUIRED_SPECIALS = (
    UNKNOWN_TOKEN,
    PADDING_TOKEN,
    SEQUENCE_START_TOKEN,
    SEQUENCE_END_TOKEN,
)


class Vocabulary:
    """Token-to-id map with dense ids (id = position in the source file)."""

    def __init__(self, tokens: Sequence[str]):
        self._token_to_id: dict[str, int] = {}
        for i, token in enumerate(tokens):
            if not token:
                raise VocabularyError(f"empty token at id {i}")
            if token in self._token_to_id:
                raise VocabularyError(f"duplicate token {token!r} at id {i}")
            self._token_to_id[token] = i
        for special in _REQUIRED_SPECIALS:
            if special not in self._token_to_id:
                raise VocabularyError(f"vocabulary is missing special token {special!r}")
        self._tokens = tuple(tokens)
        self._max_piece_length = max(len(t) for t in tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def token_to_id(self, token: str) -> int:
        return self._token_to_id[token]

    def id_to_token(self, index: int) -> str:
        return self._tokens[index]

    @property
    def unknown_id(self) -> int:
        return self._token_to_id[UNKNOWN_TOKEN]

    @property
    def padding_id(self) -> int:
        return self._token_to_id[PADDING_TOKEN]


def load_vocabulary(source: Union[str, Iterable[str]]) -> Vocabulary:
    """Load a vocabulary: UTF-8, one token per line, line number = id."""
    lines = source.splitlines() if isinstance(source, str) else source
    return Vocabulary([line.rstrip("\n").rstrip("\r") for line in lines])


class AlignmentApproach(Enum):
    ALL_SUBTOKENS = "all"
    FIRST_SUBTOKEN_ONLY = "first"


class OverflowPolicy(Enum):
    TRUNCATE = "truncate"
    WINDOW = "window"


@dataclass(frozen=True)
class TokenizerConfig:
    """Fixed-length sequence preparation settings.

    ``max_sequence_length`` counts the start/end specials, so a
    sequence holds at most ``max_sequence_length - 2`` content pieces.
    When windowing, the stride must leave room for overlap
    (``window_stride <= max_sequence_length - 2``) so consecutive
    windows cover every piece.
    """

    max_sequence_length: int = 256
    overflow: OverflowPolicy = OverflowPolicy.TRUNCATE
    window_stride: int = 128

    def __post_init__(self):
        check_positive(self.max_sequence_length, "max_sequence_length")
        if self.max_sequence_length < 3:
            raise ValueError("max_sequence_length must be at least 3 (specials + 1 piece)")
        check_positive(self.window_stride, "window_stride")
        if self.overflow is OverflowPolicy.WINDOW and self.window_stride > self.capacity:
            raise ValueError(
                f"window_stride {self.window_stride} must not exceed content capacity "
                f"{self.capacity} or windows would leave gaps"
            )

    @property
    def capacity(self) -> int:
        """Content pieces per sequence, excluding the two specials."""
        return self.max_sequence_length - 2


@dataclass(frozen=True)
class TokenizedSequence:
    """One fixed-length model input.

    All arrays have length ``max_sequence_length``. ``word_index``
    traces each content token to its source word (None for specials and
    padding) and is non-decreasing over content tokens. ``word_count``
    is the number of words in the source sentence, which may exceed the
    words represented here when the sentence overflowed.
    """

    tokens: tuple[str, ...]
    ids: tuple[int, ...]
    word_index: tuple[int | None, ...]
    mask: tuple[int, ...]
    word_count: int
    label_ids: tuple[int, ...] | None = None

    def __post_init__(self):
        n = len(self.tokens)
        if not (len(self.ids) == len(self.word_index) == len(self.mask) == n):
            raise AlignmentError("sequence arrays must all have the same length")
        if self.label_ids is not None and len(self.label_ids) != n:
            raise AlignmentError("label_ids length must match the sequence length")

    def __len__(self) -> int:
        return len(self.tokens)

    def covered_words(self) -> list[int]:
        """Distinct source word indices present, in order."""
        out: list[int] = []
        for wi in self.word_index:
            if wi is not None and (not out or wi != out[-1]):
                out.append(wi)
        return out


def tokenize_word(vocab: Vocabulary, word: str) -> list[str]:
    """Greedy longest-prefix-first segmentation of one word.

    Non-initial pieces carry the continuation prefix. If the word
    cannot be fully segmented it maps to a single unknown token, which
    keeps the piece-to-word trace one-to-one.
    """
    check_word(word)
    pieces: list[str] = []
    start = 0
    while start < len(word):
        prefix = CONTINUATION_PREFIX if start > 0 else ""
        end = len(word)
        found = None
        while end > start:
            candidate = prefix + word[start:end]
            if candidate in vocab:
                found = candidate
                break
            end -= 1
        if found is None:
            return [UNKNOWN_TOKEN]
        pieces.append(found)
        start = end
    return pieces


def _pack(
    vocab: Vocabulary,
    config: TokenizerConfig,
    pieces: Sequence[str],
    piece_word: Sequence[int],
    word_count: int,
) -> TokenizedSequence:
    tokens = [SEQUENCE_START_TOKEN, *pieces, SEQUENCE_END_TOKEN]
    word_index: list[int | None] = [None, *piece_word, None]
    mask = [1] * len(tokens)
    pad = config.max_sequence_length - len(tokens)
    tokens.extend([PADDING_TOKEN] * pad)
    word_index.extend([None] * pad)
    mask.extend([0] * pad)
    return TokenizedSequence(
        tokens=tuple(tokens),
        ids=tuple(vocab.token_to_id(t) for t in tokens),
        word_index=tuple(word_index),
        mask=tuple(mask),
        word_count=word_count,
    )


def encode_sentence(
    vocab: Vocabulary, config: TokenizerConfig, words: Sequence[str]
) -> list[TokenizedSequence]:
    """Tokenize a sentence into one or more fixed-length sequences.

    Overflow beyond the content capacity is either cut off (truncate)
    or emitted as overlapping windows advancing by the configured
    stride, which together cover every piece.
    """
    pieces: list[str] = []
    piece_word: list[int] = []
    for wi, word in enumerate(words):
        for piece in tokenize_word(vocab, word):
            pieces.append(piece)
            piece_word.append(wi)

    cap = config.capacity
    if len(pieces) <= cap:
        return [_pack(vocab, config, pieces, piece_word, len(words))]

    if config.overflow is OverflowPolicy.TRUNCATE:
        return [_pack(vocab, config, pieces[:cap], piece_word[:cap], len(words))]

    sequences: list[TokenizedSequence] = []
    start = 0
    while start < len(pieces):
        stop = min(start + cap, len(pieces))
        sequences.append(
            _pack(vocab, config, pieces[start:stop], piece_word[start:stop], len(words))
        )
        if stop == len(pieces):
            break
        start += config.window_stride
    return sequences


def align_labels(
    sequence: TokenizedSequence,
    word_tags: Sequence[Tag],
    inventory: LabelInventory,
    approach: AlignmentApproach = AlignmentApproach.ALL_SUBTOKENS,
    *,
    repeat_begin: bool = False,
) -> TokenizedSequence:
    """Attach label ids to a sequence from one tag per source word.

    Special and padding tokens always get the ignore label. With
    ``repeat_begin`` the ALL_SUBTOKENS approach writes the Begin tag on
    continuation pieces verbatim instead of switching to Inside; that
    variant does not round-trip through span decoding and exists for
    comparison experiments only.
    """
    if len(word_tags) != sequence.word_count:
        raise AlignmentError(
            f"got {len(word_tags)} tags for a sentence of {sequence.word_count} words"
        )
    ignore_id = inventory.ignore_id
    label_ids: list[int] = []
    prev_word: int | None = None
    for wi in sequence.word_index:
        if wi is None:
            label_ids.append(ignore_id)
            continue
        tag = word_tags[wi]
        first_piece = wi != prev_word
        prev_word = wi
        if first_piece:
            label_ids.append(inventory.tag_to_id(tag))
        elif approach is AlignmentApproach.FIRST_SUBTOKEN_ONLY:
            label_ids.append(ignore_id)
        else:
            if tag.kind is TagKind.BEGIN and not repeat_begin:
                tag = Tag.inside(tag.entity_class)
            label_ids.append(inventory.tag_to_id(tag))
    return replace(sequence, label_ids=tuple(label_ids))


def project_to_words(
    sequence: TokenizedSequence, token_tags: Sequence[Tag]
) -> list[Tag]:
    """Collapse per-token tags back to one repaired tag per source word.

    Each word takes the tag of its first sub-token; an ignore
    prediction there falls back to O (as do words the sequence does not
    cover). The rule is the same under both alignment approaches.
    """
    if len(token_tags) != len(sequence):
        raise AlignmentError(
            f"got {len(token_tags)} token tags for a sequence of length {len(sequence)}"
        )
    word_tags: list[Tag] = [OUTSIDE] * sequence.word_count
    prev_word: int | None = None
    for tag, wi in zip(token_tags, sequence.word_index):
        if wi is None or wi == prev_word:
            continue
        prev_word = wi
        word_tags[wi] = OUTSIDE if tag is IGNORE or tag.kind is TagKind.IGNORE else tag
    return repair_tag_sequence(word_tags)


def merge_window_tags(
    sequences: Sequence[TokenizedSequence],
    token_tags_per_sequence: Sequence[Sequence[Tag]],
) -> list[Tag]:
    """Combine per-window token tags into one tag per source word.

    Overlapping windows predict some words more than once. Each word
    takes the prediction from the window where it sits furthest from
    the window's content edges (predictions near an edge lack context);
    ties go to the earlier window. Words no window covers fall back to
    O, and the merged sequence is repaired.
    """
    if not sequences:
        raise AlignmentError("cannot merge zero sequences")
    if len(token_tags_per_sequence) != len(sequences):
        raise AlignmentError("need one tag sequence per window")
    word_count = sequences[0].word_count
    if any(s.word_count != word_count for s in sequences):
        raise AlignmentError("windows disagree about the source word count")

    word_tags: list[Tag] = [OUTSIDE] * word_count
    best_distance: list[int] = [-1] * word_count
    for sequence, token_tags in zip(sequences, token_tags_per_sequence):
        if len(token_tags) != len(sequence):
            raise AlignmentError(
                f"got {len(token_tags)} token tags for a sequence of length {len(sequence)}"
            )
        content = [i for i, wi in enumerate(sequence.word_index) if wi is not None]
        if not content:
            continue
        first, last = content[0], content[-1]
        prev_word: int | None = None
        for position, (tag, wi) in enumerate(zip(token_tags, sequence.word_index)):
            if wi is None or wi == prev_word:
                continue
            prev_word = wi
            distance = min(position - first, last - position)
            if distance > best_distance[wi]:
                best_distance[wi] = distance
                word_tags[wi] = OUTSIDE if tag.kind is TagKind.IGNORE else tag
    return repair_tag_sequence(word_tags)
