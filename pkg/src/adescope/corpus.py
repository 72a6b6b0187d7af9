"""Corpus and prediction file IO, composition and class distribution.

Corpus format (UTF-8 TSV, ``format="tsv"``)::

    id<TAB>text<TAB>class<TAB>spans

with a literal header row. ``class`` is one of A, X, N, S. ``spans`` holds
``start:end`` pairs joined by ``;`` (empty when the sample has none).
Backslash, tab, newline and carriage return inside the text are escaped as
``\\\\``, ``\\t``, ``\\n`` and ``\\r``. A JSON-lines adapter
(``format="jsonl"``) reads and writes one ``{id, text, class, spans}``
object per line.

Prediction files map text ids to predicted spans, one ``id<TAB>spans`` row
per text, preceded by a ``# key: value`` metadata header block naming the
producer (model name, run id). Loading after writing is the identity for
both formats.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import ParseError, ValidationError
from .text import REPORT_CLASS_ORDER, LabeledSample, RawText, SampleClass, Span

__all__ = [
    "CorpusPartition",
    "DistributionReport",
    "PredictionFile",
    "CORPUS_HEADER",
    "load_corpus",
    "write_corpus",
    "compose_training_set",
    "distribution_report",
    "load_predictions",
    "write_predictions",
]

LOGGER = logging.getLogger(__name__)

CORPUS_HEADER = "id\ttext\tclass\tspans"

_PARTITION_NAMES = ("train", "test", "custom")

_UNESCAPE = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}
_ESCAPE = {ord("\\"): "\\\\", ord("\t"): "\\t", ord("\n"): "\\n", ord("\r"): "\\r"}


@dataclass(frozen=True)
class CorpusPartition:
    """An ordered collection of labeled samples with unique ids."""

    name: str
    samples: tuple[LabeledSample, ...]

    def __post_init__(self) -> None:
        if self.name not in _PARTITION_NAMES:
            raise ValidationError(
                f"partition name must be one of {_PARTITION_NAMES}, got {self.name!r}"
            )
        if not isinstance(self.samples, tuple):
            object.__setattr__(self, "samples", tuple(self.samples))
        seen: set[str] = set()
        for sample in self.samples:
            if sample.text.id in seen:
                raise ValidationError(f"duplicate sample id {sample.text.id!r}")
            seen.add(sample.text.id)

    @cached_property
    def by_id(self) -> Mapping[str, LabeledSample]:
        return {sample.text.id: sample for sample in self.samples}

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class DistributionReport:
    """Per-class counts and percentages for a partition."""

    counts: Mapping[SampleClass, int]
    total: int
    percentages: Mapping[SampleClass, float]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "counts": {c.value: self.counts[c] for c in REPORT_CLASS_ORDER},
            "percentages": {c.value: self.percentages[c] for c in REPORT_CLASS_ORDER},
        }


def _escape_text(text: str) -> str:
    return text.translate(_ESCAPE)


def _unescape_text(field: str, where: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(field):
        ch = field[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(field) or field[i + 1] not in _UNESCAPE:
            raise ParseError(f"{where}: bad escape sequence in text field")
        out.append(_UNESCAPE[field[i + 1]])
        i += 2
    return "".join(out)


def _parse_span_field(field: str, where: str) -> list[Span]:
    spans: list[Span] = []
    if not field:
        return spans
    for chunk in field.split(";"):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ParseError(f"{where}: malformed span {chunk!r}, expected start:end")
        try:
            start, end = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(
                f"{where}: non-integer span offsets in {chunk!r}"
            ) from None
        try:
            spans.append(Span(start, end))
        except ValidationError as exc:
            raise ParseError(f"{where}: {exc}") from None
    return spans


def _format_span_field(spans: Iterable[Span]) -> str:
    return ";".join(f"{s.start}:{s.end}" for s in sorted(spans))


def _parse_corpus_tsv(raw: str, source: str) -> list[LabeledSample]:
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        LOGGER.warning("corpus file %s is empty", source)
        return []
    if lines[0] != CORPUS_HEADER:
        raise ParseError(f"{source}:1: expected header {CORPUS_HEADER!r}")
    samples: list[LabeledSample] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        where = f"{source}:{lineno}"
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"{where}: expected 4 tab-separated fields")
        sample_id, text_field, class_field, span_field = fields
        if not sample_id:
            raise ParseError(f"{where}: empty sample id")
        if sample_id in seen:
            raise ParseError(f"{where}: duplicate sample id {sample_id!r}")
        seen.add(sample_id)
        where = f"{where} (id {sample_id!r})"
        try:
            sample_class = SampleClass(class_field)
        except ValueError:
            raise ParseError(f"{where}: unknown class {class_field!r}") from None
        content = _unescape_text(text_field, where)
        spans = _parse_span_field(span_field, where)
        try:
            samples.append(
                LabeledSample(RawText(sample_id, content), frozenset(spans), sample_class)
            )
        except ValidationError as exc:
            raise ParseError(f"{where}: {exc}") from None
    if not samples:
        LOGGER.warning("corpus file %s contains no samples", source)
    return samples


def _parse_corpus_jsonl(raw: str, source: str) -> list[LabeledSample]:
    samples: list[LabeledSample] = []
    seen: set[str] = set()
    for lineno, line in enumerate(raw.split("\n"), 1):
        if not line.strip():
            continue
        where = f"{source}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{where}: invalid JSON ({exc.msg})") from None
        if not isinstance(record, dict):
            raise ParseError(f"{where}: expected a JSON object")
        missing = {"id", "text", "class", "spans"} - set(record)
        if missing:
            raise ParseError(f"{where}: missing keys {sorted(missing)}")
        sample_id = record["id"]
        if sample_id in seen:
            raise ParseError(f"{where}: duplicate sample id {sample_id!r}")
        seen.add(sample_id)
        where = f"{where} (id {sample_id!r})"
        try:
            sample_class = SampleClass(record["class"])
        except ValueError:
            raise ParseError(f"{where}: unknown class {record['class']!r}") from None
        try:
            spans = frozenset(Span(int(s), int(e)) for s, e in record["spans"])
            samples.append(
                LabeledSample(RawText(sample_id, record["text"]), spans, sample_class)
            )
        except (ValidationError, TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from None
    if not samples:
        LOGGER.warning("corpus file %s contains no samples", source)
    return samples


def load_corpus(
    path: Union[str, Path], format: str = "tsv", name: str | None = None
) -> CorpusPartition:
    """Load a corpus file. ``format`` is ``tsv`` (native) or ``jsonl``.

    Row-level problems (bad class letter, span out of bounds, class and
    span mismatch, duplicate ids) raise :class:`ParseError` naming the file,
    line and sample id. An empty file loads as an empty partition with a
    logged warning.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    if format == "tsv":
        samples = _parse_corpus_tsv(raw, str(path))
    elif format == "jsonl":
        samples = _parse_corpus_jsonl(raw, str(path))
    else:
        raise ValidationError(f"unknown corpus format {format!r}")
    if name is None:
        name = path.stem if path.stem in _PARTITION_NAMES else "custom"
    return CorpusPartition(name, tuple(samples))


def write_corpus(
    partition: CorpusPartition, path: Union[str, Path], format: str = "tsv"
) -> None:
    """Write a partition in the chosen format; loading it back is the identity."""
    if format == "tsv":
        lines = [CORPUS_HEADER]
        for sample in partition.samples:
            if "\t" in sample.text.id or "\n" in sample.text.id:
                raise ValidationError(
                    f"sample id {sample.text.id!r} cannot be serialised as TSV"
                )
            lines.append(
                "\t".join(
                    (
                        sample.text.id,
                        _escape_text(sample.text.content),
                        sample.sample_class.value,
                        _format_span_field(sample.gold_spans),
                    )
                )
            )
    elif format == "jsonl":
        lines = [
            json.dumps(
                {
                    "id": sample.text.id,
                    "text": sample.text.content,
                    "class": sample.sample_class.value,
                    "spans": [[s.start, s.end] for s in sorted(sample.gold_spans)],
                },
                ensure_ascii=False,
            )
            for sample in partition.samples
        ]
    else:
        raise ValidationError(f"unknown corpus format {format!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def compose_training_set(
    base: CorpusPartition,
    add_n: bool = False,
    add_s: bool = False,
    n_pool: CorpusPartition | None = None,
    s_pool: CorpusPartition | None = None,
) -> CorpusPartition:
    """Extend a base corpus of A and X samples with negated and speculated pools.

    The output keeps a stable order: base samples first, then the N pool,
    then the S pool. The base must contain only classes A and X, each pool
    only its own class, and ids must not collide.
    """
    for sample in base.samples:
        if sample.sample_class not in (SampleClass.ADE, SampleClass.NO_ADE):
            raise ValidationError(
                f"base sample {sample.text.id!r} has class "
                f"{sample.sample_class.value}; base must contain only A and X"
            )
    samples = list(base.samples)
    for flag, pool, wanted, label in (
        (add_n, n_pool, SampleClass.NEGATED, "n_pool"),
        (add_s, s_pool, SampleClass.SPECULATED, "s_pool"),
    ):
        if not flag:
            continue
        if pool is None:
            raise ValidationError(f"{label} is required when its add flag is set")
        for sample in pool.samples:
            if sample.sample_class is not wanted:
                raise ValidationError(
                    f"{label} sample {sample.text.id!r} has class "
                    f"{sample.sample_class.value}, expected {wanted.value}"
                )
        samples.extend(pool.samples)
    seen: set[str] = set()
    for sample in samples:
        if sample.text.id in seen:
            raise ValidationError(f"id collision on {sample.text.id!r}")
        seen.add(sample.text.id)
    return CorpusPartition(base.name, tuple(samples))


def distribution_report(partition: CorpusPartition) -> DistributionReport:
    """Count samples per class; percentages are rounded to 2 decimals."""
    counts = {cls: 0 for cls in SampleClass}
    for sample in partition.samples:
        counts[sample.sample_class] += 1
    total = len(partition.samples)
    percentages = {
        cls: round(100.0 * counts[cls] / total, 2) if total else 0.0
        for cls in SampleClass
    }
    return DistributionReport(counts, total, percentages)


@dataclass(frozen=True, eq=False)
class PredictionFile:
    """Predicted spans per text id, plus producer metadata."""

    metadata: Mapping[str, str]
    entries: Mapping[str, frozenset[Span]]

    def __post_init__(self) -> None:
        for key, value in self.metadata.items():
            if "\n" in key or "\n" in value:
                raise ValidationError("prediction metadata must be single-line")

    def spans_for(self, text_id: str) -> frozenset[Span]:
        """Spans predicted for a text; ids without an entry are empty."""
        return self.entries.get(text_id, frozenset())


def load_predictions(path: Union[str, Path]) -> PredictionFile:
    """Load a prediction file; malformed rows raise with their line number."""
    path = Path(path)
    metadata: dict[str, str] = {}
    entries: dict[str, frozenset[Span]] = {}
    in_header = True
    for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if in_header:
                body = line[1:].strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    metadata[key.strip()] = value.strip()
            continue
        in_header = False
        where = f"{path}:{lineno}"
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(f"{where}: expected 'id<TAB>spans'")
        text_id, span_field = fields
        if not text_id:
            raise ParseError(f"{where}: empty text id")
        if text_id in entries:
            raise ParseError(f"{where}: duplicate entry for id {text_id!r}")
        entries[text_id] = frozenset(_parse_span_field(span_field, where))
    return PredictionFile(metadata, entries)


def write_predictions(predictions: PredictionFile, path: Union[str, Path]) -> None:
    """Write a prediction file: metadata header, then one row per id.

    Rows are ordered by id and spans by offset, so serialisation is
    canonical and writing after loading reproduces a canonical file byte
    for byte.
    """
    lines = [f"# {key}: {value}" for key, value in predictions.metadata.items()]
    for text_id in sorted(predictions.entries):
        if "\t" in text_id or "\n" in text_id or text_id.startswith("#"):
            raise ValidationError(
                f"text id {text_id!r} cannot be serialised in a prediction file"
            )
        lines.append(f"{text_id}\t{_format_span_field(predictions.entries[text_id])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
