from __future__ import annotations

from pathlib import Path

import pytest

from evigate.config import PipelineConfig
from evigate.corpus import load_corpus
from evigate.pipeline import Engine

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
GLOSSARY = CORPUS_DIR / "glossary.jsonl"

# lines collected by test_acceptance and echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def fixture_questions() -> list[str]:
    return [q for q in (FIXTURES / "questions.txt").read_text(encoding="utf-8").splitlines() if q.strip()]


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus(CORPUS_DIR, [GLOSSARY])


@pytest.fixture(scope="session")
def fixture_engine(fixture_corpus):
    return Engine.build(fixture_corpus, PipelineConfig())


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory, fixture_engine):
    from evigate.store import save_bundle

    return save_bundle(fixture_engine, tmp_path_factory.mktemp("bundle") / "fixture.idx")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
