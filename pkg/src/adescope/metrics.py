"""Relaxed span matching and scoring.

Predicted spans are matched one-to-one against gold spans in two passes:
exact equality first, then partial (any character overlap) greedily by
descending overlap size. Partial matches count half in both precision and
recall:

    recall    = (TP + 0.5 * Partial) / (TP + Partial + FN)
    precision = (TP + 0.5 * Partial) / (TP + Partial + FP)
    f1        = 2 * P * R / (P + R)

with the convention that an undefined ratio (0/0) is 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .combine import EntitySet, overlap_length, overlaps
from .errors import ValidationError
from .text import REPORT_CLASS_ORDER, LabeledSample, SampleClass, Span

__all__ = [
    "MatchKind",
    "MatchOutcome",
    "Scores",
    "SampleOutcomes",
    "MatchReport",
    "match_spans",
    "relaxed_scores",
    "evaluate_corpus",
    "merge_reports",
    "report_to_dict",
    "write_report",
]


class MatchKind(str, Enum):
    TP = "TP"
    PARTIAL = "Partial"
    FP = "FP"
    FN = "FN"


@dataclass(frozen=True)
class MatchOutcome:
    """One matched (or unmatched) span pair."""

    kind: MatchKind
    gold: Span | None
    predicted: Span | None

    def __post_init__(self) -> None:
        needs_gold = self.kind in (MatchKind.TP, MatchKind.PARTIAL, MatchKind.FN)
        needs_pred = self.kind in (MatchKind.TP, MatchKind.PARTIAL, MatchKind.FP)
        if needs_gold != (self.gold is not None) or needs_pred != (
            self.predicted is not None
        ):
            raise ValidationError(
                f"{self.kind.value} outcome with gold={self.gold} "
                f"predicted={self.predicted}"
            )
        if self.kind is MatchKind.TP and self.gold != self.predicted:
            raise ValidationError("TP requires identical gold and predicted spans")
        if (
            self.kind is MatchKind.PARTIAL
            and self.gold is not None
            and self.predicted is not None
            and not overlaps(self.gold, self.predicted)
        ):
            raise ValidationError("Partial requires overlapping spans")


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


def relaxed_scores(tp: int, par: int, fp: int, fn: int) -> Scores:
    """Compute relaxed precision, recall and F1 from match counts."""
    for name, value in (("tp", tp), ("par", par), ("fp", fp), ("fn", fn)):
        if value < 0:
            raise ValidationError(f"{name} must be >= 0, got {value}")
    hits = tp + 0.5 * par
    recall_denominator = tp + par + fn
    precision_denominator = tp + par + fp
    recall = hits / recall_denominator if recall_denominator else 0.0
    precision = hits / precision_denominator if precision_denominator else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return Scores(precision, recall, f1)


def match_spans(
    gold: Iterable[Span], predicted: Iterable[Span]
) -> list[MatchOutcome]:
    """Match predicted spans against gold spans one-to-one.

    Gold spans must be pairwise non-overlapping. Pass one pairs exact
    equals as TP. Pass two pairs the remainder greedily by descending
    character overlap, ties broken by earliest gold start, as Partial.
    Unpaired predictions become FP, unpaired golds FN; every input span
    appears in exactly one outcome.
    """
    gold_list = sorted(set(gold))
    for left, right in zip(gold_list, gold_list[1:]):
        if left.end > right.start:
            raise ValidationError(
                f"gold spans [{left.start}, {left.end}) and "
                f"[{right.start}, {right.end}) overlap"
            )
    predicted_set = set(predicted)

    outcomes: list[MatchOutcome] = []
    gold_open = set(gold_list)
    pred_open = set(predicted_set)
    for span in gold_list:
        if span in pred_open:
            outcomes.append(MatchOutcome(MatchKind.TP, span, span))
            gold_open.discard(span)
            pred_open.discard(span)

    candidates = [
        (overlap_length(pred, gld), gld, pred)
        for pred in pred_open
        for gld in gold_open
        if overlaps(pred, gld)
    ]
    candidates.sort(
        key=lambda c: (-c[0], c[1].start, c[1].end, c[2].start, c[2].end)
    )
    for _, gld, pred in candidates:
        if gld in gold_open and pred in pred_open:
            outcomes.append(MatchOutcome(MatchKind.PARTIAL, gld, pred))
            gold_open.discard(gld)
            pred_open.discard(pred)

    for span in sorted(pred_open):
        outcomes.append(MatchOutcome(MatchKind.FP, None, span))
    for span in sorted(gold_open):
        outcomes.append(MatchOutcome(MatchKind.FN, span, None))
    return outcomes


@dataclass(frozen=True)
class SampleOutcomes:
    """Match outcomes for one sample."""

    text_id: str
    sample_class: SampleClass
    outcomes: tuple[MatchOutcome, ...]

    def count(self, kind: MatchKind) -> int:
        return sum(1 for outcome in self.outcomes if outcome.kind is kind)


@dataclass(frozen=True, eq=False)
class MatchReport:
    """Aggregated evaluation over a corpus (or several merged runs)."""

    samples: tuple[SampleOutcomes, ...]
    tp: int
    par: int
    fp: int
    fn: int
    fp_by_class: Mapping[SampleClass, int]

    @cached_property
    def scores(self) -> Scores:
        return relaxed_scores(self.tp, self.par, self.fp, self.fn)


def evaluate_corpus(
    samples: Sequence[LabeledSample], predictions: Iterable[EntitySet]
) -> MatchReport:
    """Match every sample's predictions against its gold spans.

    Predictions align to samples by text id; a sample with no entry counts
    as predicted-empty. Predictions for unknown ids, or duplicate entries
    for one id, are validation errors. False positives are additionally
    tallied per sample class.
    """
    by_id: dict[str, EntitySet] = {}
    for entity_set in predictions:
        if entity_set.text_id in by_id:
            raise ValidationError(
                f"duplicate predictions for text id {entity_set.text_id!r}"
            )
        by_id[entity_set.text_id] = entity_set
    known = {sample.text.id for sample in samples}
    unknown = sorted(set(by_id) - known)
    if unknown:
        raise ValidationError(
            "predictions reference unknown text ids: " + ", ".join(unknown)
        )

    rows: list[SampleOutcomes] = []
    tp = par = fp = fn = 0
    fp_by_class = {cls: 0 for cls in SampleClass}
    for sample in samples:
        entry = by_id.get(sample.text.id)
        predicted = entry.spans if entry is not None else frozenset()
        outcomes = tuple(match_spans(sample.gold_spans, predicted))
        row = SampleOutcomes(sample.text.id, sample.sample_class, outcomes)
        rows.append(row)
        tp += row.count(MatchKind.TP)
        par += row.count(MatchKind.PARTIAL)
        fp += row.count(MatchKind.FP)
        fn += row.count(MatchKind.FN)
        fp_by_class[sample.sample_class] += row.count(MatchKind.FP)
    return MatchReport(tuple(rows), tp, par, fp, fn, fp_by_class)


def merge_reports(reports: Iterable[MatchReport]) -> MatchReport:
    """Pool several reports into one by summing their counts.

    Merging is associative and commutative up to sample order. Use it to
    aggregate multiple runs externally; no averaging happens here.
    """
    report_list = list(reports)
    if not report_list:
        raise ValidationError("merge_reports requires at least one report")
    fp_by_class = {cls: 0 for cls in SampleClass}
    samples: list[SampleOutcomes] = []
    tp = par = fp = fn = 0
    for report in report_list:
        samples.extend(report.samples)
        tp += report.tp
        par += report.par
        fp += report.fp
        fn += report.fn
        for cls in SampleClass:
            fp_by_class[cls] += report.fp_by_class.get(cls, 0)
    return MatchReport(tuple(samples), tp, par, fp, fn, fp_by_class)


def _span_pair(span: Span | None) -> list[int] | None:
    return None if span is None else [span.start, span.end]


def report_to_dict(report: MatchReport, verbose: bool = False) -> dict:
    """JSON-ready view of a report; scores are rounded to 4 decimals."""
    scores = report.scores
    payload: dict = {
        "counts": {
            "tp": report.tp,
            "partial": report.par,
            "fp": report.fp,
            "fn": report.fn,
        },
        "fp_by_class": {
            cls.value: report.fp_by_class.get(cls, 0) for cls in REPORT_CLASS_ORDER
        },
        "scores": {
            "precision": round(scores.precision, 4),
            "recall": round(scores.recall, 4),
            "f1": round(scores.f1, 4),
        },
    }
    if verbose:
        payload["samples"] = [
            {
                "id": row.text_id,
                "class": row.sample_class.value,
                "outcomes": [
                    {
                        "kind": outcome.kind.value,
                        "gold": _span_pair(outcome.gold),
                        "predicted": _span_pair(outcome.predicted),
                    }
                    for outcome in row.outcomes
                ],
            }
            for row in report.samples
        ]
    return payload


def write_report(
    report: MatchReport, path: Union[str, Path], verbose: bool = False
) -> None:
    """Serialise a report as UTF-8 JSON with a trailing newline."""
    payload = report_to_dict(report, verbose=verbose)
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
