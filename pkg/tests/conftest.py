from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

import pytest

from innovation_pace.corpus import AuthorRef, CitationStub, Enrichment, PreprintRecord, VersionEvent
from innovation_pace.report.selfcheck import bundled_fixture

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def utc(*args: int) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


def make_record(
    arxiv_id: str,
    times: Sequence[datetime],
    authors: Iterable[tuple[str, Optional[str]]] = (),
    topics: Sequence[str] = ("Machine learning",),
    citation_count: int = 0,
    citations: Sequence[CitationStub] = (),
    doi: Optional[str] = None,
    journal_ref: Optional[str] = None,
    enriched: bool = True,
) -> PreprintRecord:
    return PreprintRecord(
        arxiv_id=arxiv_id,
        title=f"title {arxiv_id}",
        abstract="",
        authors=tuple(AuthorRef(name, aid) for name, aid in authors),
        categories=frozenset({"cs.AI"}),
        versions=tuple(VersionEvent(i, t) for i, t in enumerate(times, start=1)),
        doi=doi,
        journal_ref=journal_ref,
        enrichment=Enrichment(f"s2-{arxiv_id}", tuple(topics), citation_count, tuple(citations)) if enriched else None,
    )


@pytest.fixture
def fixture_corpus_path() -> Path:
    return bundled_fixture()


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    number = name.split("_")[2]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[number] = "SKIP" if report.skipped else ("pass" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"acceptance: criterion={int(number)} status={_ACCEPTANCE[number]}")
