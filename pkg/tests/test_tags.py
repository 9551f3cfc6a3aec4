"""Tag algebra: parsing, the label inventory, repair, and span codecs."""

import random

import pytest
from hypothesis import given, strategies as st

from aner import (
    AnnotatedSentence,
    EntitySpan,
    InventoryError,
    LabelInventory,
    SpanEncodingError,
    Tag,
    TagKind,
    TagSequenceError,
    build_label_inventory,
    decode_spans,
    encode_spans,
    make_span,
    repair_tag_sequence,
)
from aner.tags import IGNORE, OUTSIDE

from conftest import SMALL_CLASSES, random_span_set, random_tags, random_words


class TestTag:
    def test_parse_forms(self):
        assert Tag.parse("B-Person") == Tag.begin("Person")
        assert Tag.parse("I-Person") == Tag.inside("Person")
        assert Tag.parse("O") == OUTSIDE
        assert Tag.parse("[PAD]") is not None
        assert Tag.parse("[PAD]").kind is TagKind.IGNORE

    def test_parse_rejects_garbage(self):
        for bad in ("", "B-", "I-", "X-Person", "b-Person", "BPerson", "O-Person"):
            with pytest.raises(TagSequenceError):
                Tag.parse(bad)

    def test_text_roundtrip(self):
        for text in ("B-Person", "I-Nation", "O", "[PAD]"):
            assert Tag.parse(text).to_text() == text

    def test_outside_carries_no_class(self):
        with pytest.raises(TagSequenceError):
            Tag(TagKind.OUTSIDE, "Person")
        with pytest.raises(TagSequenceError):
            Tag(TagKind.BEGIN)


class TestLabelInventory:
    def test_index_law(self):
        inv = build_label_inventory(["Person", "Location"])
        assert inv.id_to_tag(0) == OUTSIDE
        assert inv.id_to_tag(1) == Tag.begin("Person")
        assert inv.id_to_tag(2) == Tag.inside("Person")
        assert inv.id_to_tag(3) == Tag.begin("Location")
        assert inv.id_to_tag(4) == Tag.inside("Location")
        assert inv.id_to_tag(5).kind is TagKind.IGNORE
        assert inv.size == 6
        assert inv.decodable_count == 5
        assert inv.ignore_id == 5

    def test_fifty_classes_give_102_labels(self):
        inv = build_label_inventory([f"C{i}" for i in range(50)])
        assert inv.size == 102
        assert inv.decodable_count == 101

    def test_ids_are_a_bijection(self, small_inventory):
        for i in range(small_inventory.size):
            assert small_inventory.tag_to_id(small_inventory.id_to_tag(i)) == i

    def test_duplicate_class_rejected(self):
        with pytest.raises(InventoryError):
            build_label_inventory(["Person", "Person"])

    def test_blank_class_rejected(self):
        with pytest.raises(InventoryError):
            build_label_inventory(["Person", " "])

    def test_unknown_lookups_raise(self, small_inventory):
        with pytest.raises(InventoryError):
            small_inventory.tag_to_id(Tag.begin("Nope"))
        with pytest.raises(InventoryError):
            small_inventory.id_to_tag(small_inventory.size)

    def test_equality_is_by_classes(self):
        assert build_label_inventory(["A", "B"]) == build_label_inventory(["A", "B"])
        assert build_label_inventory(["A", "B"]) != build_label_inventory(["B", "A"])


class TestRepair:
    def test_orphan_inside_becomes_begin(self):
        assert repair_tag_sequence([Tag.inside("Person")]) == [Tag.begin("Person")]
        assert repair_tag_sequence([OUTSIDE, Tag.inside("Person")]) == [
            OUTSIDE,
            Tag.begin("Person"),
        ]

    def test_class_change_breaks_the_run(self):
        got = repair_tag_sequence([Tag.begin("Person"), Tag.inside("Location")])
        assert got == [Tag.begin("Person"), Tag.begin("Location")]

    def test_repaired_tag_feeds_the_next_decision(self):
        # The second I-P continues the repaired B-P, not the original.
        got = repair_tag_sequence([Tag.inside("Person"), Tag.inside("Person")])
        assert got == [Tag.begin("Person"), Tag.inside("Person")]

    def test_legal_sequences_pass_through(self):
        rng = random.Random(1)
        for _ in range(50):
            tags = random_tags(rng, rng.randrange(0, 10))
            assert repair_tag_sequence(tags) == tags

    def test_ignore_rejected(self):
        with pytest.raises(TagSequenceError):
            repair_tag_sequence([IGNORE])

    @given(
        st.lists(
            st.sampled_from(
                [OUTSIDE]
                + [Tag.begin(c) for c in SMALL_CLASSES]
                + [Tag.inside(c) for c in SMALL_CLASSES]
            ),
            max_size=30,
        )
    )
    def test_idempotent_and_decodable(self, tags):
        repaired = repair_tag_sequence(tags)
        assert repair_tag_sequence(repaired) == repaired
        if tags:
            sentence = AnnotatedSentence.from_words(
                [f"w{i}" for i in range(len(tags))], repaired
            )
            decode_spans(sentence)  # must not raise


class TestSpanCodec:
    def test_basic_decode(self):
        sentence = AnnotatedSentence.from_words(
            ["a", "b", "c", "d"],
            [Tag.begin("Person"), Tag.inside("Person"), OUTSIDE, Tag.begin("Nation")],
        )
        spans = decode_spans(sentence)
        assert [(s.entity_class, s.word_start, s.word_end) for s in spans] == [
            ("Person", 0, 1),
            ("Nation", 3, 3),
        ]
        assert spans[0].surface == "a b"
        assert sentence.text[spans[0].char_start : spans[0].char_end] == "a b"

    def test_adjacent_begin_closes_previous(self):
        sentence = AnnotatedSentence.from_words(
            ["a", "b"], [Tag.begin("Person"), Tag.begin("Person")]
        )
        assert [(s.word_start, s.word_end) for s in decode_spans(sentence)] == [
            (0, 0),
            (1, 1),
        ]

    def test_illegal_inside_raises(self):
        sentence = AnnotatedSentence.from_words(["a"], [Tag.inside("Person")])
        with pytest.raises(TagSequenceError):
            decode_spans(sentence)

    def test_encode_bounds_checked(self):
        span = EntitySpan("Person", 0, 5, 0, 1, "x")
        with pytest.raises(SpanEncodingError):
            encode_spans(["a", "b"], [span])

    def test_encode_overlap_rejected(self):
        words = ["a", "b", "c"]
        with pytest.raises(SpanEncodingError):
            encode_spans(
                words,
                [make_span(words, "Person", 0, 1), make_span(words, "Nation", 1, 2)],
            )

    def test_make_span_matches_decode(self):
        words = ["القاهرة", "مدينة"]
        span = make_span(words, "Location", 0, 0)
        sentence = encode_spans(words, [span])
        assert decode_spans(sentence) == [span]

    def test_roundtrip_small_hand_case(self):
        words = random_words(random.Random(3), 6)
        spans = [make_span(words, "Person", 1, 2), make_span(words, "Nation", 4, 4)]
        assert decode_spans(encode_spans(words, spans)) == spans

    def test_roundtrip_randomized(self):
        rng = random.Random(2024)
        for _ in range(300):
            words = random_words(rng, rng.randrange(1, 13))
            spans = random_span_set(rng, words)
            assert decode_spans(encode_spans(words, spans)) == spans


class TestAnnotatedSentence:
    def test_length_mismatch_rejected(self):
        with pytest.raises(TagSequenceError):
            AnnotatedSentence.from_words(["a", "b"], [OUTSIDE])

    def test_whitespace_word_rejected(self):
        with pytest.raises(TagSequenceError):
            AnnotatedSentence.from_words(["a b"], [OUTSIDE])
        with pytest.raises(TagSequenceError):
            AnnotatedSentence.from_words([""], [OUTSIDE])

    def test_ignore_tag_rejected(self):
        with pytest.raises(TagSequenceError):
            AnnotatedSentence.from_words(["a"], [IGNORE])

    def test_offsets_checked_against_text(self):
        with pytest.raises(TagSequenceError):
            AnnotatedSentence(
                words=("a",), tags=(OUTSIDE,), char_offsets=((1, 2),), text="a"
            )

    def test_from_words_offsets(self):
        sentence = AnnotatedSentence.from_words(["ab", "c"], [OUTSIDE, OUTSIDE])
        assert sentence.text == "ab c"
        assert sentence.char_offsets == ((0, 2), (3, 4))
