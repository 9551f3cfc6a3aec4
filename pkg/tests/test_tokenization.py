"""Sub-word tokenization, sequence packing, and label alignment."""

import random

import pytest

from aner import (
    AlignmentApproach,
    AlignmentError,
    CONTINUATION_PREFIX,
    OverflowPolicy,
    PADDING_TOKEN,
    SEQUENCE_END_TOKEN,
    SEQUENCE_START_TOKEN,
    Tag,
    TokenizedSequence,
    TokenizerConfig,
    UNKNOWN_TOKEN,
    Vocabulary,
    VocabularyError,
    align_labels,
    build_label_inventory,
    encode_sentence,
    load_vocabulary,
    merge_window_tags,
    project_to_words,
    tokenize_word,
)
from aner.tags import IGNORE, OUTSIDE

from conftest import SMALL_CLASSES, arabic_word, random_tags

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]


def toy_vocab(*extra: str) -> Vocabulary:
    return Vocabulary(SPECIALS + list(extra))


class TestVocabulary:
    def test_dense_ids_follow_file_order(self):
        vocab = load_vocabulary("[PAD]\n[UNK]\n[CLS]\n[SEP]\na\nb\n")
        assert vocab.token_to_id("[PAD]") == 0
        assert vocab.token_to_id("b") == 5
        assert vocab.id_to_token(4) == "a"
        assert len(vocab) == 6
        assert "a" in vocab and "z" not in vocab

    def test_special_id_properties(self):
        vocab = toy_vocab("x")
        assert vocab.unknown_id == vocab.token_to_id(UNKNOWN_TOKEN)
        assert vocab.padding_id == vocab.token_to_id(PADDING_TOKEN)

    def test_duplicate_token_rejected(self):
        with pytest.raises(VocabularyError):
            Vocabulary(SPECIALS + ["a", "a"])

    def test_empty_token_rejected(self):
        with pytest.raises(VocabularyError):
            Vocabulary(SPECIALS + [""])

    def test_missing_special_rejected(self):
        with pytest.raises(VocabularyError):
            Vocabulary(["[PAD]", "[UNK]", "[CLS]", "a"])


class TestTokenizeWord:
    def test_greedy_prefers_longest_prefix(self):
        vocab = toy_vocab("a", "ab", "##a", "##b")
        assert tokenize_word(vocab, "aba") == ["ab", "##a"]

    def test_continuation_pieces_prefixed(self):
        vocab = toy_vocab("a", "##b", "##c")
        assert tokenize_word(vocab, "abc") == ["a", "##b", "##c"]

    def test_unsegmentable_word_becomes_single_unknown(self):
        vocab = toy_vocab("a", "##b")
        # "q" has no pieces at all; "aq" fails midway. Both collapse to
        # one [UNK] so the piece still traces to exactly one word.
        assert tokenize_word(vocab, "q") == [UNKNOWN_TOKEN]
        assert tokenize_word(vocab, "aq") == [UNKNOWN_TOKEN]

    def test_known_vector(self, demo_vocabulary):
        assert tokenize_word(demo_vocabulary, "القاهرة") == ["ال", "##قاهر", "##ة"]

    def test_demo_vocabulary_size(self, demo_vocabulary):
        assert len(demo_vocabulary) == 200

    def test_concat_roundtrip(self, demo_vocabulary):
        rng = random.Random(21)
        for _ in range(300):
            word = arabic_word(rng)
            pieces = tokenize_word(demo_vocabulary, word)
            if pieces == [UNKNOWN_TOKEN]:
                continue
            rebuilt = pieces[0] + "".join(
                p[len(CONTINUATION_PREFIX) :] for p in pieces[1:]
            )
            assert rebuilt == word

    def test_deterministic(self, demo_vocabulary):
        rng = random.Random(22)
        words = [arabic_word(rng) for _ in range(100)]
        first = [tokenize_word(demo_vocabulary, w) for w in words]
        second = [tokenize_word(demo_vocabulary, w) for w in words]
        assert first == second


class TestTokenizerConfig:
    def test_capacity_excludes_specials(self):
        assert TokenizerConfig(max_sequence_length=10).capacity == 8

    def test_minimum_length(self):
        with pytest.raises(ValueError):
            TokenizerConfig(max_sequence_length=2)

    def test_window_stride_bounded_by_capacity(self):
        with pytest.raises(ValueError):
            TokenizerConfig(
                max_sequence_length=8,
                overflow=OverflowPolicy.WINDOW,
                window_stride=7,
            )
        # Same stride is fine when nothing windows.
        TokenizerConfig(max_sequence_length=8, window_stride=7)

    def test_stride_must_be_positive(self):
        with pytest.raises(ValueError):
            TokenizerConfig(window_stride=0)


class TestEncodeSentence:
    def test_single_sequence_layout(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=10)
        [seq] = encode_sentence(demo_vocabulary, config, ["القاهرة", "و"])
        assert seq.tokens == (
            SEQUENCE_START_TOKEN,
            "ال",
            "##قاهر",
            "##ة",
            "و",
            SEQUENCE_END_TOKEN,
            PADDING_TOKEN,
            PADDING_TOKEN,
            PADDING_TOKEN,
            PADDING_TOKEN,
        )
        assert seq.word_index == (None, 0, 0, 0, 1, None, None, None, None, None)
        assert seq.mask == (1, 1, 1, 1, 1, 1, 0, 0, 0, 0)
        assert seq.ids[0] == demo_vocabulary.token_to_id(SEQUENCE_START_TOKEN)
        assert seq.ids[-1] == demo_vocabulary.padding_id
        assert seq.word_count == 2
        assert len(seq) == 10

    def test_truncate_keeps_piece_prefix(self):
        vocab = toy_vocab("a")
        config = TokenizerConfig(max_sequence_length=4)  # capacity 2
        [seq] = encode_sentence(vocab, config, ["a", "a", "a", "a"])
        assert seq.covered_words() == [0, 1]
        assert seq.word_count == 4

    def test_windows_cover_every_word(self):
        vocab = toy_vocab("a")
        config = TokenizerConfig(
            max_sequence_length=5, overflow=OverflowPolicy.WINDOW, window_stride=2
        )
        words = ["a"] * 7
        sequences = encode_sentence(vocab, config, words)
        assert len(sequences) > 1
        covered = set()
        for seq in sequences:
            covered.update(seq.covered_words())
        assert covered == set(range(7))

    def test_empty_sentence_is_one_blank_sequence(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=6)
        [seq] = encode_sentence(demo_vocabulary, config, [])
        assert seq.word_count == 0
        assert seq.covered_words() == []

    def test_array_length_mismatch_rejected(self):
        with pytest.raises(AlignmentError):
            TokenizedSequence(
                tokens=("[CLS]",), ids=(2, 3), word_index=(None,), mask=(1,),
                word_count=0,
            )


def tags_from_ids(inventory, label_ids):
    return [inventory.id_to_tag(i) for i in label_ids]


class TestAlignLabels:
    @pytest.fixture
    def setup(self, demo_vocabulary, small_inventory):
        config = TokenizerConfig(max_sequence_length=16)
        words = ["القاهرة", "و"]  # 3 pieces + 1 piece
        tags = [Tag.begin("Location"), Tag.begin("Nation")]
        [seq] = encode_sentence(demo_vocabulary, config, words)
        return seq, tags, small_inventory

    def test_all_subtokens_inside_on_continuations(self, setup):
        seq, tags, inv = setup
        labeled = align_labels(seq, tags, inv, AlignmentApproach.ALL_SUBTOKENS)
        got = tags_from_ids(inv, labeled.label_ids[:6])
        assert got == [
            IGNORE,
            Tag.begin("Location"),
            Tag.inside("Location"),
            Tag.inside("Location"),
            Tag.begin("Nation"),
            IGNORE,
        ]

    def test_repeat_begin_keeps_begin_verbatim(self, setup):
        seq, tags, inv = setup
        labeled = align_labels(
            seq, tags, inv, AlignmentApproach.ALL_SUBTOKENS, repeat_begin=True
        )
        got = tags_from_ids(inv, labeled.label_ids[1:4])
        assert got == [Tag.begin("Location")] * 3

    def test_first_subtoken_only_ignores_continuations(self, setup):
        seq, tags, inv = setup
        labeled = align_labels(seq, tags, inv, AlignmentApproach.FIRST_SUBTOKEN_ONLY)
        got = tags_from_ids(inv, labeled.label_ids[:6])
        assert got == [
            IGNORE,
            Tag.begin("Location"),
            IGNORE,
            IGNORE,
            Tag.begin("Nation"),
            IGNORE,
        ]

    def test_padding_gets_ignore(self, setup):
        seq, tags, inv = setup
        labeled = align_labels(seq, tags, inv)
        for label_id, wi in zip(labeled.label_ids, labeled.word_index):
            if wi is None:
                assert label_id == inv.ignore_id

    def test_tag_count_must_match_word_count(self, setup):
        seq, tags, inv = setup
        with pytest.raises(AlignmentError):
            align_labels(seq, tags[:1], inv)


class TestProjectToWords:
    def roundtrip(self, demo_vocabulary, inventory, approach, repeat_begin=False):
        rng = random.Random(31)
        config = TokenizerConfig(max_sequence_length=64)
        for _ in range(200):
            n = rng.randrange(1, 9)
            words = [arabic_word(rng) for _ in range(n)]
            tags = random_tags(rng, n)
            [seq] = encode_sentence(demo_vocabulary, config, words)
            labeled = align_labels(
                seq, tags, inventory, approach, repeat_begin=repeat_begin
            )
            token_tags = tags_from_ids(inventory, labeled.label_ids)
            assert project_to_words(seq, token_tags) == tags

    def test_roundtrip_all_subtokens(self, demo_vocabulary, small_inventory):
        self.roundtrip(demo_vocabulary, small_inventory, AlignmentApproach.ALL_SUBTOKENS)

    def test_roundtrip_repeat_begin(self, demo_vocabulary, small_inventory):
        self.roundtrip(
            demo_vocabulary,
            small_inventory,
            AlignmentApproach.ALL_SUBTOKENS,
            repeat_begin=True,
        )

    def test_roundtrip_first_subtoken_only(self, demo_vocabulary, small_inventory):
        self.roundtrip(
            demo_vocabulary, small_inventory, AlignmentApproach.FIRST_SUBTOKEN_ONLY
        )

    def test_ignore_prediction_falls_back_to_outside(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=8)
        [seq] = encode_sentence(demo_vocabulary, config, ["مصر"])
        token_tags = [IGNORE] * len(seq)
        assert project_to_words(seq, token_tags) == [OUTSIDE]

    def test_uncovered_words_become_outside(self):
        vocab = toy_vocab("a")
        config = TokenizerConfig(max_sequence_length=3)  # capacity 1
        [seq] = encode_sentence(vocab, config, ["a", "a"])
        token_tags = [IGNORE, Tag.begin("Person"), IGNORE]
        assert project_to_words(seq, token_tags) == [Tag.begin("Person"), OUTSIDE]

    def test_orphan_inside_repaired_after_projection(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=8)
        [seq] = encode_sentence(demo_vocabulary, config, ["مصر"])
        token_tags = [IGNORE, Tag.inside("Person"), IGNORE] + [IGNORE] * 5
        assert project_to_words(seq, token_tags) == [Tag.begin("Person")]

    def test_length_mismatch_rejected(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=8)
        [seq] = encode_sentence(demo_vocabulary, config, ["مصر"])
        with pytest.raises(AlignmentError):
            project_to_words(seq, [OUTSIDE])


class TestMergeWindowTags:
    def windows(self, stride):
        vocab = toy_vocab("a")
        config = TokenizerConfig(
            max_sequence_length=5, overflow=OverflowPolicy.WINDOW, window_stride=stride
        )
        return encode_sentence(vocab, config, ["a"] * 5)

    def fill(self, seq, content_tags):
        tags = []
        i = 0
        for wi in seq.word_index:
            if wi is None:
                tags.append(IGNORE)
            else:
                tags.append(content_tags[i])
                i += 1
        return tags

    def test_interior_prediction_beats_edge_prediction(self):
        # Stride 1: word 2 sits at the edge of the first window (distance
        # 0) and in the middle of the second (distance 1), so the second
        # window's prediction wins.
        sequences = self.windows(stride=1)
        begin, inside = Tag.begin("Person"), Tag.inside("Person")
        per_window = [self.fill(sequences[0], [OUTSIDE, OUTSIDE, OUTSIDE])]
        per_window.append(self.fill(sequences[1], [OUTSIDE, begin, OUTSIDE]))
        for seq in sequences[2:]:
            per_window.append(self.fill(seq, [OUTSIDE, OUTSIDE, OUTSIDE]))
        merged = merge_window_tags(sequences, per_window)
        assert merged[2] == begin
        assert inside not in merged

    def test_tie_goes_to_earlier_window(self):
        # Stride 2: word 2 has distance 0 in both windows.
        sequences = self.windows(stride=2)
        assert len(sequences) == 2
        begin = Tag.begin("Person")
        per_window = [
            self.fill(sequences[0], [OUTSIDE, OUTSIDE, begin]),
            self.fill(sequences[1], [OUTSIDE, OUTSIDE, OUTSIDE]),
        ]
        merged = merge_window_tags(sequences, per_window)
        assert merged == [OUTSIDE, OUTSIDE, begin, OUTSIDE, OUTSIDE]

    def test_merged_sequence_is_repaired(self):
        sequences = self.windows(stride=2)
        inside = Tag.inside("Person")
        per_window = [
            self.fill(sequences[0], [inside, OUTSIDE, OUTSIDE]),
            self.fill(sequences[1], [OUTSIDE, OUTSIDE, OUTSIDE]),
        ]
        merged = merge_window_tags(sequences, per_window)
        assert merged[0] == Tag.begin("Person")

    def test_single_window_matches_projection(self, demo_vocabulary, small_inventory):
        rng = random.Random(41)
        config = TokenizerConfig(max_sequence_length=32)
        for _ in range(50):
            n = rng.randrange(1, 6)
            words = [arabic_word(rng) for _ in range(n)]
            tags = random_tags(rng, n)
            [seq] = encode_sentence(demo_vocabulary, config, words)
            labeled = align_labels(seq, tags, small_inventory)
            token_tags = tags_from_ids(small_inventory, labeled.label_ids)
            assert merge_window_tags([seq], [token_tags]) == project_to_words(
                seq, token_tags
            )

    def test_word_count_disagreement_rejected(self, demo_vocabulary):
        config = TokenizerConfig(max_sequence_length=8)
        [a] = encode_sentence(demo_vocabulary, config, ["مصر"])
        [b] = encode_sentence(demo_vocabulary, config, ["مصر", "و"])
        with pytest.raises(AlignmentError):
            merge_window_tags([a, b], [[OUTSIDE] * 8, [OUTSIDE] * 8])

    def test_zero_sequences_rejected(self):
        with pytest.raises(AlignmentError):
            merge_window_tags([], [])
