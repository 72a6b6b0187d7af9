"""Span algebra: discarding predicted entities that fall inside scopes.

Combining an entity extractor with a scope detector means dropping every
predicted span whose characters intersect any detected scope. Applying the
negation and speculation filters together is the same as filtering by the
union of both scope sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .scope import Phenomenon, ScopeSpan
from .text import Span

__all__ = [
    "EntitySet",
    "DiscardedSpan",
    "FilterReport",
    "overlaps",
    "overlap_length",
    "filter_by_scopes",
    "combine",
]


def overlaps(a: Span, b: Span) -> bool:
    """True when the two half-open intervals share at least one character."""
    return a.start < b.end and b.start < a.end


def overlap_length(a: Span, b: Span) -> int:
    """Number of characters shared by the two intervals (0 when disjoint)."""
    return max(0, min(a.end, b.end) - max(a.start, b.start))


@dataclass(frozen=True)
class EntitySet:
    """Predicted entity spans for one text; duplicates collapse."""

    text_id: str
    spans: frozenset[Span]

    def __post_init__(self) -> None:
        if not self.text_id:
            raise ValidationError("entity set requires a text id")
        if not isinstance(self.spans, frozenset):
            object.__setattr__(self, "spans", frozenset(self.spans))


@dataclass(frozen=True)
class DiscardedSpan:
    """A dropped prediction together with the scope that witnessed the drop."""

    span: Span
    scope: ScopeSpan
    phenomenon: Phenomenon


@dataclass(frozen=True)
class FilterReport:
    """Outcome of one filtering pass: the survivors and the audit trail."""

    kept: EntitySet
    discarded: tuple[DiscardedSpan, ...]


def _witness_order(scope: ScopeSpan) -> tuple:
    # Earliest scope wins; ties go to the longest, then stable extras.
    return (
        scope.span.start,
        -scope.span.end,
        scope.phenomenon.value,
        scope.trigger.span.start,
        scope.trigger.cue.pattern,
    )


def _filter(ades: EntitySet, scopes: Iterable[ScopeSpan]) -> FilterReport:
    ordered = sorted(scopes, key=_witness_order)
    for scope in ordered:
        if scope.text_id is not None and scope.text_id != ades.text_id:
            raise ValidationError(
                f"scope bound to text {scope.text_id!r} cannot filter "
                f"predictions for text {ades.text_id!r}"
            )
    kept: set[Span] = set()
    discarded: list[DiscardedSpan] = []
    for span in sorted(ades.spans):
        witness = next((s for s in ordered if overlaps(span, s.span)), None)
        if witness is None:
            kept.add(span)
        else:
            discarded.append(DiscardedSpan(span, witness, witness.phenomenon))
    return FilterReport(EntitySet(ades.text_id, frozenset(kept)), tuple(discarded))


def filter_by_scopes(ades: EntitySet, scopes: Iterable[ScopeSpan]) -> FilterReport:
    """Drop every predicted span that intersects any of the given scopes.

    Every input span lands in exactly one of ``kept`` and ``discarded``.
    Each discarded span records a witness scope: the earliest-starting
    overlapping scope, ties broken by the longest. Scopes bound to a
    different text id are a validation error; an empty scope set returns
    the input unchanged.
    """
    return _filter(ades, scopes)


def combine(
    ades: EntitySet,
    negations: Iterable[ScopeSpan],
    speculations: Iterable[ScopeSpan],
) -> FilterReport:
    """Apply the negation and speculation filters together.

    Equivalent to filtering by the union of both scope sets, and therefore
    to intersecting the survivor sets of the two single filters. Witness
    scopes are chosen across both phenomena by the same earliest-start,
    longest-scope rule.
    """
    return _filter(ades, [*negations, *speculations])
