#!/usr/bin/env python3
"""Regenerate the checked-in corpus fixtures.

Writes the synthetic benchmark corpus under ``data/corpus/`` (train split
of 846 A + 778 X base samples plus 251 N and 227 S pool samples, test
split of 200 A / 194 X / 73 N / 73 S) and the 12-sample end-to-end
fixture under ``tests/fixtures/``. Output is deterministic: texts are
assembled by cycling through fixed template, drug and symptom pools.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from adescope import (  # noqa: E402
    CorpusPartition,
    LabeledSample,
    RawText,
    SampleClass,
    Span,
    compose_training_set,
    write_corpus,
)

DRUGS = [
    "metoprolol", "quetiapine", "citalopram", "adderall", "humira",
    "lisinopril", "sertraline", "amoxicillin", "saxagliptin", "tamiflu",
    "ibuprofen", "atorvastatin", "gabapentin", "metformin", "prednisone",
    "omeprazole", "losartan", "duloxetine", "tramadol", "montelukast",
]

SYMPTOMS = [
    "headaches", "nausea", "dizziness", "insomnia", "fatigue", "hives",
    "joint pain", "dry mouth", "brain fog", "tremors", "palpitations",
    "swelling", "numbness", "chills", "sweating", "vomiting", "cramps",
    "itching", "rash", "migraine", "drowsiness", "weight gain",
    "blurred vision", "muscle pain", "stomach ache",
]

# Templates deliberately avoid every cue in the bundled lexicons so that
# class A and X samples stay trigger-free.
A_TEMPLATES = [
    "day {n} on {drug} and the {symptom} is wearing me down",
    "this {drug} gives me {symptom} every single time",
    "week {n} of {drug} and the {symptom} is back again",
    "my doctor switched me to {drug} and the {symptom} started within days",
    "anyone else on {drug} dealing with {symptom} all day",
    "the {symptom} from this {drug} dose kept me up all night",
]

X_TEMPLATES = [
    "picked up my {drug} refill on the way home",
    "pharmacist said the generic {drug} works just the same",
    "my cousin just started {drug} for her blood pressure",
    "remember to take your {drug} with food folks",
    "the {drug} shortage at our pharmacy is finally over",
    "insurance finally approved the {drug} prescription today",
]

N_TEMPLATES = [
    "no {symptom} at all since i started {drug}",
    "{drug} is not giving me {symptom} this time",
    "never any {symptom} for me on {drug}",
    "switched to {drug} and the {symptom} never happened again",
    "my doctor says {drug} doesn't cause {symptom}",
    "there's no way {drug} is behind the {symptom}",
]

S_TEMPLATES = [
    "might be getting {symptom} from the {drug}",
    "wondering if the {symptom} is from {drug}",
    "possible {symptom} with {drug}, anyone else",
    "i think the {drug} is behind my {symptom}",
    "could the {drug} give you {symptom}",
    "apparently {drug} causes {symptom} in some people",
]


def build_samples(
    prefix: str,
    sample_class: SampleClass,
    templates: list[str],
    count: int,
) -> list[LabeledSample]:
    samples = []
    for i in range(count):
        template = templates[i % len(templates)]
        drug = DRUGS[i % len(DRUGS)]
        symptom = SYMPTOMS[i % len(SYMPTOMS)]
        text = template.format(drug=drug, symptom=symptom, n=(i % 9) + 1)
        if sample_class is SampleClass.ADE:
            start = text.index(symptom)
            spans = frozenset({Span(start, start + len(symptom))})
            assert text[start : start + len(symptom)] == symptom
        else:
            spans = frozenset()
        samples.append(
            LabeledSample(RawText(f"{prefix}-{i + 1:04d}", text), spans, sample_class)
        )
    return samples


def main() -> None:
    corpus_dir = REPO / "data" / "corpus"
    fixture_dir = REPO / "tests" / "fixtures"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    fixture_dir.mkdir(parents=True, exist_ok=True)

    base = CorpusPartition(
        "train",
        tuple(
            build_samples("trn-a", SampleClass.ADE, A_TEMPLATES, 846)
            + build_samples("trn-x", SampleClass.NO_ADE, X_TEMPLATES, 778)
        ),
    )
    n_pool = CorpusPartition(
        "custom", tuple(build_samples("trn-n", SampleClass.NEGATED, N_TEMPLATES, 251))
    )
    s_pool = CorpusPartition(
        "custom", tuple(build_samples("trn-s", SampleClass.SPECULATED, S_TEMPLATES, 227))
    )
    train = compose_training_set(base, add_n=True, add_s=True, n_pool=n_pool, s_pool=s_pool)
    test = CorpusPartition(
        "test",
        tuple(
            build_samples("tst-a", SampleClass.ADE, A_TEMPLATES, 200)
            + build_samples("tst-x", SampleClass.NO_ADE, X_TEMPLATES, 194)
            + build_samples("tst-n", SampleClass.NEGATED, N_TEMPLATES, 73)
            + build_samples("tst-s", SampleClass.SPECULATED, S_TEMPLATES, 73)
        ),
    )

    write_corpus(base, corpus_dir / "train_base.tsv")
    write_corpus(n_pool, corpus_dir / "train_n_pool.tsv")
    write_corpus(s_pool, corpus_dir / "train_s_pool.tsv")
    write_corpus(train, corpus_dir / "train.tsv")
    write_corpus(test, corpus_dir / "test.tsv")

    e2e_rows = [
        ("s01", "This drug gives me headaches and nausea every day.",
         SampleClass.ADE, ["headaches", "nausea"]),
        ("s02", "Day two on statins and the burning pain in my shoulders is unreal.",
         SampleClass.ADE, ["burning pain"]),
        ("s03", "My arms are covered in hives since starting amoxicillin, plus the mild arm pain everyone gets.",
         SampleClass.ADE, ["hives"]),
        ("s04", "Metoprolol is NOT known to cause hypokalemia.",
         SampleClass.NEGATED, []),
        ("s05", "No pain no inflammation since I started the HUMIRA shots.",
         SampleClass.NEGATED, []),
        ("s06", "Zero headaches on this new med, never even a twinge of nausea.",
         SampleClass.NEGATED, []),
        ("s07", "really possible #restlesslegs with #quetiapine?",
         SampleClass.SPECULATED, []),
        ("s08", "I think the new inhaler might be causing insomnia.",
         SampleClass.SPECULATED, []),
        ("s09", "Could be the sertraline but my anxiety is probably just stress.",
         SampleClass.SPECULATED, []),
        ("s10", "Picked up my prescription refill today, pharmacy line was endless.",
         SampleClass.NO_ADE, []),
        ("s11", "My cousin works in pain management clinics now.",
         SampleClass.NO_ADE, []),
        ("s12", "Flu shot queue was fine, no complaints from me.",
         SampleClass.NO_ADE, []),
    ]
    e2e_samples = []
    for sample_id, text, sample_class, phrases in e2e_rows:
        spans = set()
        for phrase in phrases:
            start = text.index(phrase)
            assert text[start : start + len(phrase)] == phrase
            spans.add(Span(start, start + len(phrase)))
        e2e_samples.append(
            LabeledSample(RawText(sample_id, text), frozenset(spans), sample_class)
        )
    write_corpus(
        CorpusPartition("custom", tuple(e2e_samples)), fixture_dir / "e2e_corpus.tsv"
    )
    print(f"wrote {len(train)} train, {len(test)} test, {len(e2e_samples)} e2e samples")


if __name__ == "__main__":
    main()
