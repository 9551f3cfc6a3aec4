"""Tag-scheme algebra for BIO sequence labeling.

Defines the label inventory (B-/I- per entity class, O, and an ignore
label used only at the sub-token level), validation and repair of tag
sequences, and the conversion between word-level tag sequences and
entity spans.

Everything here is immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import InventoryError, SpanEncodingError, TagSequenceError

OUTSIDE_TEXT = "O"
IGNORE_TEXT = "[PAD]"


class TagKind(Enum):
    BEGIN = "B"
    INSIDE = "I"
    OUTSIDE = "O"
    IGNORE = "IGNORE"


@dataclass(frozen=True)
class Tag:
    """One BIO tag. ``entity_class`` is present iff kind is Begin/Inside.

    Textual forms: ``B-<class>``, ``I-<class>``, ``O``, ``[PAD]``.
    """

    kind: TagKind
    entity_class: str | None = None

    def __post_init__(self):
        if self.kind in (TagKind.BEGIN, TagKind.INSIDE):
            if not self.entity_class:
                raise TagSequenceError(f"{self.kind.value}- tag requires an entity class")
        elif self.entity_class is not None:
            raise TagSequenceError(f"{self.kind.name} tag must not carry an entity class")

    @staticmethod
    def begin(entity_class: str) -> "Tag":
        return Tag(TagKind.BEGIN, entity_class)

    @staticmethod
    def inside(entity_class: str) -> "Tag":
        return Tag(TagKind.INSIDE, entity_class)

    @staticmethod
    def parse(text: str) -> "Tag":
        """Parse the canonical textual form used in CoNLL files."""
        if text == OUTSIDE_TEXT:
            return OUTSIDE
        if text == IGNORE_TEXT:
            return IGNORE
        if len(text) > 2 and text[1] == "-" and text[0] in ("B", "I"):
            kind = TagKind.BEGIN if text[0] == "B" else TagKind.INSIDE
            return Tag(kind, text[2:])
        raise TagSequenceError(f"unknown tag form: {text!r}")

    def to_text(self) -> str:
        if self.kind is TagKind.OUTSIDE:
            return OUTSIDE_TEXT
        if self.kind is TagKind.IGNORE:
            return IGNORE_TEXT
        return f"{self.kind.value}-{self.entity_class}"

    def __str__(self) -> str:
        return self.to_text()


OUTSIDE = Tag(TagKind.OUTSIDE)
IGNORE = Tag(TagKind.IGNORE)


def _check_class_name(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise InventoryError(f"entity class name must be a non-empty string, got {name!r}")
    if any(ch.isspace() for ch in name):
        raise InventoryError(f"entity class name must not contain whitespace: {name!r}")
    return name


class LabelInventory:
    """Closed set of tag labels with a dense, deterministic index mapping.

    For C entity classes the mapping is: O at index 0, then B-c and I-c
    for each class in order, and the ignore label last. That gives
    2*C + 1 decodable labels and 2*C + 2 indices in total; the ignore
    index is never produced by decoding.
    """

    def __init__(self, classes: Iterable[str]):
        seen: dict[str, None] = {}
        for name in classes:
            _check_class_name(name)
            if name in seen:
                raise InventoryError(f"duplicate entity class: {name!r}")
            seen[name] = None
        self._classes: tuple[str, ...] = tuple(seen)

        id_to_tag: list[Tag] = [OUTSIDE]
        for name in self._classes:
            id_to_tag.append(Tag.begin(name))
            id_to_tag.append(Tag.inside(name))
        id_to_tag.append(IGNORE)
        self._id_to_tag = tuple(id_to_tag)
        self._tag_to_id = {tag: i for i, tag in enumerate(id_to_tag)}

    @property
    def classes(self) -> tuple[str, ...]:
        return self._classes

    def __len__(self) -> int:
        return len(self._id_to_tag)

    @property
    def size(self) -> int:
        """Total number of indices, including the ignore label."""
        return len(self._id_to_tag)

    @property
    def decodable_count(self) -> int:
        """Number of labels decoding may emit (everything except ignore)."""
        return len(self._id_to_tag) - 1

    @property
    def ignore_id(self) -> int:
        return len(self._id_to_tag) - 1

    def tag_to_id(self, tag: Tag) -> int:
        try:
            return self._tag_to_id[tag]
        except KeyError:
            raise InventoryError(f"tag {tag} not in inventory") from None

    def id_to_tag(self, index: int) -> Tag:
        if not 0 <= index < len(self._id_to_tag):
            raise InventoryError(f"label id {index} out of range 0..{len(self._id_to_tag) - 1}")
        return self._id_to_tag[index]

    def __contains__(self, tag: Tag) -> bool:
        return tag in self._tag_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelInventory) and self._classes == other._classes

    def __hash__(self) -> int:
        return hash(self._classes)

    def __repr__(self) -> str:
        return f"LabelInventory({len(self._classes)} classes, {self.size} indices)"


def build_label_inventory(classes: Iterable[str]) -> LabelInventory:
    """Build the deterministic tag-index mapping for the given classes."""
    return LabelInventory(classes)


@dataclass(frozen=True)
class EntitySpan:
    """A decoded entity: class, inclusive word range, half-open char range."""

    entity_class: str
    word_start: int
    word_end: int
    char_start: int
    char_end: int
    surface: str

    def __post_init__(self):
        if self.word_start > self.word_end:
            raise SpanEncodingError(
                f"word_start {self.word_start} > word_end {self.word_end}"
            )


def _offsets_for_words(words: Sequence[str]) -> tuple[tuple[int, int], ...]:
    """Half-open character offsets for words joined by single spaces."""
    offsets = []
    pos = 0
    for word in words:
        offsets.append((pos, pos + len(word)))
        pos += len(word) + 1
    return tuple(offsets)


@dataclass(frozen=True)
class AnnotatedSentence:
    """Words with word-level tags and character offsets into ``text``.

    The ignore tag is forbidden here; it exists only at the sub-token
    level. Offsets are half-open and must be consistent with ``text``.
    """

    words: tuple[str, ...]
    tags: tuple[Tag, ...]
    char_offsets: tuple[tuple[int, int], ...]
    text: str

    def __post_init__(self):
        if not (len(self.words) == len(self.tags) == len(self.char_offsets)):
            raise TagSequenceError(
                f"length mismatch: {len(self.words)} words, {len(self.tags)} tags, "
                f"{len(self.char_offsets)} offsets"
            )
        for word in self.words:
            if not word or any(ch.isspace() for ch in word):
                raise TagSequenceError(f"invalid word {word!r}: empty or contains whitespace")
        for tag in self.tags:
            if tag.kind is TagKind.IGNORE:
                raise TagSequenceError("ignore tag is not allowed at the word level")
        for word, (start, end) in zip(self.words, self.char_offsets):
            if self.text[start:end] != word:
                raise TagSequenceError(
                    f"offset ({start}, {end}) does not cover {word!r} in source text"
                )

    @staticmethod
    def from_words(words: Sequence[str], tags: Sequence[Tag]) -> "AnnotatedSentence":
        """Build a sentence whose source text is the single-space join."""
        return AnnotatedSentence(
            words=tuple(words),
            tags=tuple(tags),
            char_offsets=_offsets_for_words(words),
            text=" ".join(words),
        )

    def __len__(self) -> int:
        return len(self.words)


def repair_tag_sequence(tags: Sequence[Tag]) -> list[Tag]:
    """Return a legal BIO sequence of the same length.

    Legal inputs pass through unchanged. An Inside tag whose predecessor
    is not Begin or Inside of the same class becomes Begin of its own
    class. Idempotent.
    """
    repaired: list[Tag] = []
    prev: Tag | None = None
    for tag in tags:
        if tag.kind is TagKind.IGNORE:
            raise TagSequenceError("ignore tag is not allowed in a word-level tag sequence")
        if tag.kind is TagKind.INSIDE:
            prev_continues = prev is not None and prev.kind in (
                TagKind.BEGIN,
                TagKind.INSIDE,
            ) and prev.entity_class == tag.entity_class
            if not prev_continues:
                tag = Tag.begin(tag.entity_class)
        repaired.append(tag)
        prev = tag
    return repaired


def decode_spans(sentence: AnnotatedSentence) -> list[EntitySpan]:
    """Turn maximal B-c (I-c)* runs into entity spans, in word order.

    Requires a legal tag sequence; run :func:`repair_tag_sequence` first
    on model output.
    """
    spans: list[EntitySpan] = []
    start: int | None = None
    current_class: str | None = None

    def close(end_word: int):
        spans.append(
            EntitySpan(
                entity_class=current_class,
                word_start=start,
                word_end=end_word,
                char_start=sentence.char_offsets[start][0],
                char_end=sentence.char_offsets[end_word][1],
                surface=sentence.text[
                    sentence.char_offsets[start][0] : sentence.char_offsets[end_word][1]
                ],
            )
        )

    for i, tag in enumerate(sentence.tags):
        if tag.kind is TagKind.BEGIN:
            if start is not None:
                close(i - 1)
            start, current_class = i, tag.entity_class
        elif tag.kind is TagKind.INSIDE:
            if start is None or tag.entity_class != current_class:
                raise TagSequenceError(
                    f"illegal Inside tag at word {i}; repair the sequence first"
                )
        else:  # OUTSIDE
            if start is not None:
                close(i - 1)
                start = current_class = None
    if start is not None:
        close(len(sentence.tags) - 1)
    return spans


def encode_spans(words: Sequence[str], spans: Sequence[EntitySpan]) -> AnnotatedSentence:
    """Inverse of :func:`decode_spans` over a single-space-joined sentence.

    Spans must be non-overlapping and within bounds; their stored char
    offsets are not consulted (the sentence is rebuilt from the words).
    """
    tags: list[Tag] = [OUTSIDE] * len(words)
    claimed: list[EntitySpan | None] = [None] * len(words)
    for span in spans:
        if span.word_start < 0 or span.word_end >= len(words):
            raise SpanEncodingError(
                f"span words {span.word_start}..{span.word_end} out of bounds "
                f"for {len(words)} words"
            )
        for i in range(span.word_start, span.word_end + 1):
            if claimed[i] is not None:
                raise SpanEncodingError(f"overlapping spans at word {i}")
            claimed[i] = span
        tags[span.word_start] = Tag.begin(span.entity_class)
        for i in range(span.word_start + 1, span.word_end + 1):
            tags[i] = Tag.inside(span.entity_class)
    return AnnotatedSentence.from_words(words, tags)


def make_span(words: Sequence[str], entity_class: str, word_start: int, word_end: int) -> EntitySpan:
    """Span over ``words[word_start..word_end]`` with offsets for the
    single-space join, matching what decode produces."""
    offsets = _offsets_for_words(words)
    char_start = offsets[word_start][0]
    char_end = offsets[word_end][1]
    return EntitySpan(
        entity_class=entity_class,
        word_start=word_start,
        word_end=word_end,
        char_start=char_start,
        char_end=char_end,
        surface=" ".join(words[word_start : word_end + 1]),
    )
