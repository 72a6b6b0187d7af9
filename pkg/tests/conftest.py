from __future__ import annotations

import json
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
CORPUS_DIR = REPO / "data" / "corpus"


@pytest.fixture(scope="session")
def e2e_corpus_path() -> Path:
    return FIXTURES / "e2e_corpus.tsv"


@pytest.fixture(scope="session")
def e2e_tally() -> dict:
    return json.loads((FIXTURES / "e2e_tally.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR
