from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from adescope import (
    LabeledSample,
    RawText,
    SampleClass,
    Span,
    TagSequence,
    Token,
    ValidationError,
    bio_to_spans,
    spans_to_bio,
    tokenize,
)


def surfaces(text: str) -> list[str]:
    return [t.surface for t in tokenize(text)]


class TestSpan:
    def test_orders_by_start_then_end(self):
        assert sorted([Span(5, 9), Span(0, 3), Span(0, 2)]) == [
            Span(0, 2),
            Span(0, 3),
            Span(5, 9),
        ]

    @pytest.mark.parametrize("start,end", [(-1, 4), (3, 3), (5, 2)])
    def test_rejects_degenerate_intervals(self, start, end):
        with pytest.raises(ValidationError):
            Span(start, end)


class TestRawText:
    def test_rejects_blank_content(self):
        with pytest.raises(ValidationError):
            RawText("t1", "   ")

    def test_rejects_empty_id(self):
        with pytest.raises(ValidationError):
            RawText("", "hello")


class TestLabeledSample:
    def test_class_a_requires_spans(self):
        with pytest.raises(ValidationError):
            LabeledSample(RawText("t", "some text"), frozenset(), SampleClass.ADE)

    @pytest.mark.parametrize("cls", [SampleClass.NO_ADE, SampleClass.NEGATED, SampleClass.SPECULATED])
    def test_other_classes_must_be_spanless(self, cls):
        with pytest.raises(ValidationError):
            LabeledSample(RawText("t", "some text"), frozenset({Span(0, 4)}), cls)

    def test_rejects_out_of_bounds_span(self):
        with pytest.raises(ValidationError):
            LabeledSample(RawText("t", "tiny"), frozenset({Span(0, 10)}), SampleClass.ADE)

    def test_rejects_overlapping_gold(self):
        with pytest.raises(ValidationError):
            LabeledSample(
                RawText("t", "a longer text here"),
                frozenset({Span(0, 5), Span(3, 8)}),
                SampleClass.ADE,
            )


class TestTokenize:
    def test_empty_text_yields_no_tokens(self):
        assert tokenize("") == []

    def test_offsets_on_plain_words(self):
        tokens = tokenize("no pain no inflammation")
        assert [(t.surface, t.span.start, t.span.end) for t in tokens] == [
            ("no", 0, 2),
            ("pain", 3, 7),
            ("no", 8, 10),
            ("inflammation", 11, 23),
        ]

    def test_hashtags_keep_their_marker(self):
        tokens = tokenize("#restlesslegs #quetiapine")
        assert [(t.surface, t.span.start, t.span.end) for t in tokens] == [
            ("#restlesslegs", 0, 13),
            ("#quetiapine", 14, 25),
        ]

    def test_mentions_and_contractions_stay_whole(self):
        assert surfaces("@UKingsbrook That's correct!") == [
            "@UKingsbrook",
            "That's",
            "correct",
            "!",
        ]

    def test_punctuation_splits_from_words(self):
        assert surfaces("pain, then gone...") == [
            "pain", ",", "then", "gone", ".", ".", ".",
        ]

    def test_token_indexes_are_sequential(self):
        tokens = tokenize("a b c")
        assert [t.index for t in tokens] == [0, 1, 2]

    @given(st.text(max_size=100))
    def test_surfaces_match_their_slices_and_gaps_are_whitespace(self, text):
        tokens = tokenize(text)
        cursor = 0
        for token in tokens:
            assert text[token.span.start : token.span.end] == token.surface
            assert text[cursor : token.span.start].strip() == ""
            cursor = token.span.end
        assert text[cursor:].strip() == ""


def make_tokens(*pairs: tuple[int, int]) -> list[Token]:
    return [Token(f"t{i}", Span(s, e), i) for i, (s, e) in enumerate(pairs)]


class TestBio:
    def test_metoprolol_projection(self):
        tokens = tokenize("Metoprolol is NOT known to cause hypokalemia")
        tags = spans_to_bio(tokens, [Span(33, 44)])
        assert list(tags) == ["O", "O", "O", "O", "O", "O", "B"]

    def test_multi_token_span_gets_b_then_i(self):
        tokens = make_tokens((0, 2), (3, 6), (7, 9), (10, 14))
        tags = spans_to_bio(tokens, [Span(0, 6), Span(10, 14)])
        assert list(tags) == ["B", "I", "O", "B"]

    def test_partially_covered_token_counts_as_inside(self):
        tokens = make_tokens((0, 5), (6, 9))
        assert list(spans_to_bio(tokens, [Span(3, 7)])) == ["B", "I"]

    def test_rejects_overlapping_spans(self):
        tokens = make_tokens((0, 2), (3, 6))
        with pytest.raises(ValidationError):
            spans_to_bio(tokens, [Span(0, 4), Span(3, 6)])

    def test_bio_to_spans_reads_runs(self):
        tokens = make_tokens((0, 2), (3, 6), (7, 9), (10, 14))
        assert bio_to_spans(tokens, ["B", "I", "O", "B"]) == {Span(0, 6), Span(10, 14)}

    def test_lenient_mode_repairs_dangling_i(self):
        tokens = make_tokens((0, 2), (3, 6), (7, 9))
        assert bio_to_spans(tokens, ["O", "I", "I"]) == {Span(3, 9)}

    def test_strict_mode_rejects_dangling_i(self):
        tokens = make_tokens((0, 2), (3, 6))
        with pytest.raises(ValidationError):
            bio_to_spans(tokens, ["O", "I"], strict=True)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            bio_to_spans(make_tokens((0, 2)), ["B", "I"])

    def test_tag_sequence_validates_alphabet(self):
        with pytest.raises(ValidationError):
            TagSequence(("B", "Q"))
        assert TagSequence(("B", "I", "O")).is_well_formed
        assert not TagSequence(("I", "O")).is_well_formed
        assert not TagSequence(("O", "I")).is_well_formed


@st.composite
def tokens_with_aligned_spans(draw):
    count = draw(st.integers(min_value=1, max_value=12))
    tokens = []
    cursor = 0
    for i in range(count):
        cursor += draw(st.integers(min_value=0, max_value=2)) + (1 if i else 0)
        width = draw(st.integers(min_value=1, max_value=5))
        tokens.append(Token(f"t{i}", Span(cursor, cursor + width), i))
        cursor += width
    spans = []
    i = 0
    while i < count:
        if draw(st.booleans()):
            j = min(count - 1, i + draw(st.integers(min_value=0, max_value=2)))
            spans.append(Span(tokens[i].span.start, tokens[j].span.end))
            i = j + 1
        else:
            i += 1
    return tokens, spans


class TestBioProperties:
    @given(tokens_with_aligned_spans())
    def test_round_trip_on_aligned_spans(self, case):
        tokens, spans = case
        assert bio_to_spans(tokens, spans_to_bio(tokens, spans)) == set(spans)

    @given(tokens_with_aligned_spans())
    def test_projection_is_well_formed(self, case):
        tokens, spans = case
        assert spans_to_bio(tokens, spans).is_well_formed
