"""Cue lexicons and rule-based negation/speculation scope detection.

The engine follows the classic NegEx family of regular-expression taggers:
a small lexicon of cue phrases is matched over tokens, and each trigger cue
projects a scope over a bounded window of neighbouring tokens.

Cue categories:

* ``pre_trigger``  opens a forward scope over the tokens after the cue.
* ``post_trigger`` opens a backward scope over the tokens before the cue.
* ``pseudo_trigger`` looks like a trigger but is not one ("no wonder");
  because matching is longest-first, a pseudo match consumes and thereby
  suppresses any shorter trigger it subsumes, and opens no scope.
* ``terminator`` closes an open scope ("but", "however").

A scope ends at the earliest of: the window being exhausted, another cue
match, terminal punctuation (. ! ? or a newline between tokens), or the
edge of the text. Scopes never cross sentence boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

from .errors import ParseError, ValidationError
from .text import RawText, LabeledSample, Span, Token, match_key, tokenize

__all__ = [
    "Phenomenon",
    "CueCategory",
    "Cue",
    "CueLexicon",
    "CueMatch",
    "ScopeSpan",
    "ScopeConfig",
    "load_lexicon",
    "parse_lexicon",
    "save_lexicon",
    "default_negation_lexicon",
    "default_speculation_lexicon",
    "find_cues",
    "resolve_scopes",
    "detect_negation",
    "detect_speculation",
    "prefilter",
]

#: Tokens that close a sentence and therefore any open scope.
TERMINAL_TOKENS = frozenset({".", "!", "?", "…"})

DEFAULT_WINDOW = 5


class Phenomenon(str, Enum):
    NEGATION = "negation"
    SPECULATION = "speculation"


class CueCategory(str, Enum):
    PRE_TRIGGER = "pre_trigger"
    POST_TRIGGER = "post_trigger"
    PSEUDO_TRIGGER = "pseudo_trigger"
    TERMINATOR = "terminator"


# When distinct cues normalise to the same token key sequence, the safest
# reading wins: refuse to open a scope before closing one, close before
# opening forward, forward before backward.
_CATEGORY_PRIORITY = {
    CueCategory.PSEUDO_TRIGGER: 0,
    CueCategory.TERMINATOR: 1,
    CueCategory.PRE_TRIGGER: 2,
    CueCategory.POST_TRIGGER: 3,
}


@dataclass(frozen=True)
class Cue:
    """One lexicon entry: a casefolded phrase with its category."""

    pattern: str
    category: CueCategory
    phenomenon: Phenomenon

    def __post_init__(self) -> None:
        if not self.pattern or self.pattern != self.pattern.strip():
            raise ValidationError(f"bad cue pattern {self.pattern!r}")
        object.__setattr__(self, "pattern", self.pattern.casefold())

    @cached_property
    def pattern_keys(self) -> tuple[str, ...]:
        keys = tuple(match_key(t.surface) for t in tokenize(self.pattern))
        if not keys:
            raise ValidationError(f"cue pattern {self.pattern!r} has no tokens")
        return keys


@dataclass(frozen=True)
class CueLexicon:
    """An ordered collection of cues for one phenomenon."""

    cues: tuple[Cue, ...]
    phenomenon: Phenomenon

    def __post_init__(self) -> None:
        if not isinstance(self.cues, tuple):
            object.__setattr__(self, "cues", tuple(self.cues))
        if not self.cues:
            raise ValidationError("a cue lexicon must contain at least one cue")
        seen: set[tuple[str, CueCategory]] = set()
        for cue in self.cues:
            if cue.phenomenon is not self.phenomenon:
                raise ValidationError(
                    f"cue {cue.pattern!r} is tagged {cue.phenomenon.value}, "
                    f"lexicon is {self.phenomenon.value}"
                )
            entry = (cue.pattern, cue.category)
            if entry in seen:
                raise ValidationError(
                    f"duplicate cue {cue.pattern!r} ({cue.category.value})"
                )
            seen.add(entry)

    @cached_property
    def _index(self) -> dict[tuple[str, ...], Cue]:
        table: dict[tuple[str, ...], Cue] = {}
        for cue in self.cues:
            current = table.get(cue.pattern_keys)
            if current is None or (
                _CATEGORY_PRIORITY[cue.category] < _CATEGORY_PRIORITY[current.category]
            ):
                table[cue.pattern_keys] = cue
        return table

    @cached_property
    def max_pattern_tokens(self) -> int:
        return max(len(keys) for keys in self._index)


@dataclass(frozen=True)
class CueMatch:
    """A cue located in a token sequence; token indices are inclusive."""

    cue: Cue
    span: Span
    first_token: int
    last_token: int

    def __post_init__(self) -> None:
        if self.first_token < 0 or self.last_token < self.first_token:
            raise ValidationError(
                f"bad token range {self.first_token}..{self.last_token}"
            )


@dataclass(frozen=True)
class ScopeSpan:
    """A resolved scope: the characters governed by one trigger cue."""

    span: Span
    trigger: CueMatch
    phenomenon: Phenomenon
    text_id: str | None = None


@dataclass(frozen=True)
class ScopeConfig:
    """Detection settings: which lexicon to apply and how wide the window is."""

    lexicon: CueLexicon
    window: int = DEFAULT_WINDOW

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")


def parse_lexicon(
    content: str, phenomenon: Phenomenon, source: str = "<string>"
) -> CueLexicon:
    """Parse ``pattern|category`` lines into a lexicon.

    Blank lines and lines starting with ``#`` are ignored. Every other line
    must contain exactly one ``|`` separating a non-empty pattern from a
    category name. Duplicate (pattern, category) pairs and empty lexicons
    are rejected.
    """
    cues: list[Cue] = []
    for lineno, line in enumerate(content.split("\n"), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("|")
        if len(parts) != 2:
            raise ParseError(f"{source}:{lineno}: expected 'pattern|category'")
        pattern, category_name = parts[0].strip(), parts[1].strip()
        if not pattern:
            raise ParseError(f"{source}:{lineno}: empty cue pattern")
        try:
            category = CueCategory(category_name)
        except ValueError:
            raise ParseError(
                f"{source}:{lineno}: unknown cue category {category_name!r}"
            ) from None
        cues.append(Cue(pattern, category, phenomenon))
    if not cues:
        raise ParseError(f"{source}: lexicon contains no cues")
    try:
        return CueLexicon(tuple(cues), phenomenon)
    except ValidationError as exc:
        raise ParseError(f"{source}: {exc}") from None


def load_lexicon(path: Union[str, Path], phenomenon: Phenomenon) -> CueLexicon:
    """Load a ``pattern|category`` lexicon file (UTF-8)."""
    path = Path(path)
    return parse_lexicon(path.read_text(encoding="utf-8"), phenomenon, str(path))


def save_lexicon(lexicon: CueLexicon, path: Union[str, Path]) -> None:
    """Write one ``pattern|category`` line per cue, in lexicon order.

    Comments are not preserved; saving a lexicon loaded from a comment-free
    file reproduces that file byte for byte.
    """
    lines = [f"{cue.pattern}|{cue.category.value}" for cue in lexicon.cues]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@lru_cache(maxsize=None)
def _bundled_lexicon(filename: str, phenomenon: Phenomenon) -> CueLexicon:
    content = resources.files("adescope.data").joinpath(filename).read_text("utf-8")
    return parse_lexicon(content, phenomenon, f"adescope.data/{filename}")


def default_negation_lexicon() -> CueLexicon:
    """The negation cue lexicon shipped with the package."""
    return _bundled_lexicon("negation_cues.txt", Phenomenon.NEGATION)


def default_speculation_lexicon() -> CueLexicon:
    """The speculation cue lexicon shipped with the package."""
    return _bundled_lexicon("speculation_cues.txt", Phenomenon.SPECULATION)


def find_cues(tokens: Sequence[Token], lexicon: CueLexicon) -> list[CueMatch]:
    """Locate cue phrases in a token sequence.

    Matching is case-insensitive on token comparison keys and greedy: at
    each position the longest matching pattern wins and the scan resumes
    after it, so matches never overlap and a pseudo-trigger swallows the
    shorter trigger it subsumes. Returns matches in text order.
    """
    keys = [match_key(token.surface) for token in tokens]
    matches: list[CueMatch] = []
    index = lexicon._index
    position, count = 0, len(tokens)
    longest = min(lexicon.max_pattern_tokens, count)
    while position < count:
        found: Cue | None = None
        width = 0
        for length in range(min(longest, count - position), 0, -1):
            found = index.get(tuple(keys[position : position + length]))
            if found is not None:
                width = length
                break
        if found is None:
            position += 1
            continue
        last = position + width - 1
        matches.append(
            CueMatch(
                cue=found,
                span=Span(tokens[position].span.start, tokens[last].span.end),
                first_token=position,
                last_token=last,
            )
        )
        position = last + 1
    return matches


def resolve_scopes(
    text: Union[str, RawText],
    tokens: Sequence[Token],
    cue_matches: Iterable[CueMatch],
    window: int = DEFAULT_WINDOW,
) -> list[ScopeSpan]:
    """Project trigger cues onto scopes.

    ``text`` must be the string the tokens were produced from; it is needed
    to spot newlines between tokens. Pre-triggers scan forward from the
    token after the cue, post-triggers scan backward from the token before
    it; both stop at another cue match, terminal punctuation, a newline
    gap, the window limit, or the text edge. Cues with nothing left to
    govern produce no scope. Scopes are returned ordered by position.
    """
    if window < 1:
        raise ValidationError(f"window must be >= 1, got {window}")
    if isinstance(text, RawText):
        content, text_id = text.content, text.id
    else:
        content, text_id = text, None

    matches = list(cue_matches)
    occupied: set[int] = set()
    for match in matches:
        if match.cue.category is not CueCategory.PSEUDO_TRIGGER:
            occupied.update(range(match.first_token, match.last_token + 1))

    def newline_gap(left: int, right: int) -> bool:
        gap = content[tokens[left].span.end : tokens[right].span.start]
        return "\n" in gap or "\r" in gap

    def blocked(position: int) -> bool:
        return position in occupied or tokens[position].surface in TERMINAL_TOKENS

    scopes: list[ScopeSpan] = []
    for match in matches:
        category = match.cue.category
        if category is CueCategory.PRE_TRIGGER:
            first = last = -1
            position = match.last_token + 1
            while position < len(tokens) and position - match.last_token <= window:
                if blocked(position) or newline_gap(position - 1, position):
                    break
                if first < 0:
                    first = position
                last = position
                position += 1
            if first >= 0:
                scopes.append(
                    ScopeSpan(
                        Span(tokens[first].span.start, tokens[last].span.end),
                        match,
                        match.cue.phenomenon,
                        text_id,
                    )
                )
        elif category is CueCategory.POST_TRIGGER:
            first = last = -1
            position = match.first_token - 1
            while position >= 0 and match.first_token - position <= window:
                if blocked(position) or newline_gap(position, position + 1):
                    break
                if last < 0:
                    last = position
                first = position
                position -= 1
            if last >= 0:
                scopes.append(
                    ScopeSpan(
                        Span(tokens[first].span.start, tokens[last].span.end),
                        match,
                        match.cue.phenomenon,
                        text_id,
                    )
                )
    scopes.sort(key=lambda s: (s.span.start, s.span.end, s.trigger.span.start))
    return scopes


def _detect(text: Union[str, RawText], config: ScopeConfig) -> set[ScopeSpan]:
    tokens = tokenize(text)
    matches = find_cues(tokens, config.lexicon)
    return set(resolve_scopes(text, tokens, matches, config.window))


def detect_negation(
    text: Union[str, RawText], config: ScopeConfig | None = None
) -> set[ScopeSpan]:
    """Detect negation scopes; defaults to the bundled negation lexicon."""
    if config is None:
        config = ScopeConfig(default_negation_lexicon())
    if config.lexicon.phenomenon is not Phenomenon.NEGATION:
        raise ValidationError("detect_negation requires a negation lexicon")
    return _detect(text, config)


def detect_speculation(
    text: Union[str, RawText], config: ScopeConfig | None = None
) -> set[ScopeSpan]:
    """Detect speculation scopes; defaults to the bundled speculation lexicon."""
    if config is None:
        config = ScopeConfig(default_speculation_lexicon())
    if config.lexicon.phenomenon is not Phenomenon.SPECULATION:
        raise ValidationError("detect_speculation requires a speculation lexicon")
    return _detect(text, config)


def prefilter(
    samples: Sequence[LabeledSample], lexicons: Iterable[CueLexicon]
) -> list[LabeledSample]:
    """Keep the samples in which at least one active trigger cue fires.

    A sample survives when any provided lexicon yields a pre- or
    post-trigger match in its text. Pseudo-trigger and terminator matches
    do not count: the former are explicit non-triggers and the latter
    merely bound scopes. Order is preserved.
    """
    lexicon_list = tuple(lexicons)
    if not lexicon_list:
        raise ValidationError("prefilter requires at least one lexicon")
    triggers = (CueCategory.PRE_TRIGGER, CueCategory.POST_TRIGGER)
    kept: list[LabeledSample] = []
    for sample in samples:
        tokens = tokenize(sample.text)
        if any(
            match.cue.category in triggers
            for lexicon in lexicon_list
            for match in find_cues(tokens, lexicon)
        ):
            kept.append(sample)
    return kept
