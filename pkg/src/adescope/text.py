"""Texts, character spans, tokens and BIO tag sequences.

Offsets throughout the package are half-open ``[start, end)`` counts of
Unicode scalar values into the owning text, so ``text[span.start:span.end]``
is always the covered surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence, Union

from .errors import ValidationError

__all__ = [
    "Span",
    "RawText",
    "SampleClass",
    "LabeledSample",
    "Token",
    "TagSequence",
    "tokenize",
    "match_key",
    "spans_to_bio",
    "bio_to_spans",
]

# Word runs keep a leading # or @ (hashtags, mentions) and internal
# apostrophes (contractions such as "don't", "there's"). Every other
# non-space character becomes a single-character token.
_TOKEN_RE = re.compile(r"[#@]\w+(?:['’]\w+)*|\w+(?:['’]\w+)*|[^\w\s]")


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval [start, end)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValidationError(f"invalid span [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class RawText:
    """A unit of input text (one post) with a corpus-unique id."""

    id: str
    content: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("text id must be non-empty")
        if not self.content.strip():
            raise ValidationError(f"text {self.id!r} has empty content")


class SampleClass(str, Enum):
    """Four-way sample label used by the corpus format.

    A: mentions an adverse drug event; X: no mention; N: an event mention
    under negation; S: an event mention that is speculated or questioned.
    """

    ADE = "A"
    NO_ADE = "X"
    NEGATED = "N"
    SPECULATED = "S"


# Column order used by reports; mirrors how per-class false positives are
# conventionally tabulated (speculated, negated, present, absent).
REPORT_CLASS_ORDER = (
    SampleClass.SPECULATED,
    SampleClass.NEGATED,
    SampleClass.ADE,
    SampleClass.NO_ADE,
)


@dataclass(frozen=True)
class LabeledSample:
    """A text plus its gold entity spans and sample class."""

    text: RawText
    gold_spans: frozenset[Span]
    sample_class: SampleClass

    def __post_init__(self) -> None:
        if not isinstance(self.gold_spans, frozenset):
            object.__setattr__(self, "gold_spans", frozenset(self.gold_spans))
        length = len(self.text.content)
        for span in self.gold_spans:
            if span.end > length:
                raise ValidationError(
                    f"sample {self.text.id!r}: span [{span.start}, {span.end}) "
                    f"exceeds text length {length}"
                )
        if self.sample_class is SampleClass.ADE:
            if not self.gold_spans:
                raise ValidationError(
                    f"sample {self.text.id!r}: class A requires at least one gold span"
                )
        elif self.gold_spans:
            raise ValidationError(
                f"sample {self.text.id!r}: class {self.sample_class.value} "
                "must not carry gold spans"
            )
        ordered = sorted(self.gold_spans)
        for left, right in zip(ordered, ordered[1:]):
            if left.end > right.start:
                raise ValidationError(
                    f"sample {self.text.id!r}: gold spans [{left.start}, {left.end}) "
                    f"and [{right.start}, {right.end}) overlap"
                )


@dataclass(frozen=True)
class Token:
    """A token surface with its character span and position in the sequence."""

    surface: str
    span: Span
    index: int


_VALID_TAGS = frozenset({"B", "I", "O"})


@dataclass(frozen=True)
class TagSequence:
    """A BIO tag per token. May be ill-formed; see :meth:`is_well_formed`."""

    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.tags, tuple):
            object.__setattr__(self, "tags", tuple(self.tags))
        bad = [t for t in self.tags if t not in _VALID_TAGS]
        if bad:
            raise ValidationError(f"invalid BIO tags: {sorted(set(bad))}")

    @property
    def is_well_formed(self) -> bool:
        """True when no I tag opens the sequence or follows an O."""
        previous = "O"
        for tag in self.tags:
            if tag == "I" and previous == "O":
                return False
            previous = tag
        return True

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tags)

    def __getitem__(self, index: int) -> str:
        return self.tags[index]


def tokenize(text: Union[str, RawText]) -> list[Token]:
    """Split text into tokens; offsets index into the original string.

    Whitespace separates tokens and is never part of one. Punctuation is
    split from adjacent word characters, except a leading # or @ (hashtags
    and mentions) and apostrophes inside contractions. Empty input yields
    an empty list.
    """
    content = text.content if isinstance(text, RawText) else text
    return [
        Token(match.group(), Span(match.start(), match.end()), i)
        for i, match in enumerate(_TOKEN_RE.finditer(content))
    ]


def match_key(surface: str) -> str:
    """Comparison key for lexicon matching against a token surface.

    Casefolds, straightens curly apostrophes, and drops a leading hashtag
    marker so that "#Headache" compares equal to the lexicon entry
    "headache". Mention markers are kept: usernames are names, not words.
    """
    key = surface.casefold().replace("’", "'")
    if key.startswith("#"):
        key = key[1:]
    return key


def spans_to_bio(tokens: Sequence[Token], spans: Iterable[Span]) -> TagSequence:
    """Project character spans onto tokens as BIO tags.

    A token counts as inside a span when their character ranges intersect,
    so a partially covered token is tagged. Overlapping input spans are
    rejected.
    """
    ordered = sorted(spans)
    for left, right in zip(ordered, ordered[1:]):
        if left.end > right.start:
            raise ValidationError(
                f"spans [{left.start}, {left.end}) and "
                f"[{right.start}, {right.end}) overlap"
            )
    tags = ["O"] * len(tokens)
    for span in ordered:
        begin = True
        for position, token in enumerate(tokens):
            if token.span.start < span.end and span.start < token.span.end:
                tags[position] = "B" if begin else "I"
                begin = False
    return TagSequence(tuple(tags))


def bio_to_spans(
    tokens: Sequence[Token],
    tags: Union[TagSequence, Sequence[str]],
    strict: bool = False,
) -> set[Span]:
    """Recover character spans from BIO tags over tokens.

    Each maximal B(I)* run becomes one span from the first token's start to
    the last token's end. An I that opens the sequence or follows an O is
    repaired to B by default; with ``strict=True`` it raises instead.
    Token-boundary-aligned spans round-trip exactly through
    :func:`spans_to_bio`.
    """
    sequence = tuple(tags.tags if isinstance(tags, TagSequence) else tags)
    if len(sequence) != len(tokens):
        raise ValidationError(
            f"{len(sequence)} tags for {len(tokens)} tokens"
        )
    bad = [t for t in sequence if t not in _VALID_TAGS]
    if bad:
        raise ValidationError(f"invalid BIO tags: {sorted(set(bad))}")

    spans: set[Span] = set()
    run_start: int | None = None
    run_end = 0
    previous = "O"
    for position, tag in enumerate(sequence):
        if tag == "I" and previous == "O":
            if strict:
                raise ValidationError(
                    f"ill-formed tag sequence: I at position {position} "
                    "does not continue a span"
                )
            tag = "B"
        if tag == "B":
            if run_start is not None:
                spans.add(Span(run_start, run_end))
            run_start = tokens[position].span.start
            run_end = tokens[position].span.end
        elif tag == "I":
            run_end = tokens[position].span.end
        else:
            if run_start is not None:
                spans.add(Span(run_start, run_end))
                run_start = None
        previous = tag
    if run_start is not None:
        spans.add(Span(run_start, run_end))
    return spans
