"""Domain model shared by every stage of the pipeline.

All types are frozen dataclasses. Instants are timezone-aware UTC
``datetime`` objects at (at most) second resolution; calendar dates are
plain ``date`` objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import Any, Iterable, Optional

__all__ = [
    "AuthorRecord",
    "AuthorRef",
    "CitationStub",
    "CorpusError",
    "Enrichment",
    "ImpactTier",
    "LabeledPreprint",
    "PreprintRecord",
    "S2Status",
    "Stage",
    "StageRangeError",
    "Subfield",
    "VersionEvent",
    "build_author_records",
    "format_instant",
    "official_status",
    "parse_instant",
    "record_from_json",
    "record_to_json",
    "stage_of",
]


class CorpusError(ValueError):
    """A record violates one of the corpus invariants.

    ``invariant`` is a short machine-readable name of the broken rule.
    """

    def __init__(self, message: str, invariant: str = "record-structure") -> None:
        super().__init__(message)
        self.invariant = invariant


class StageRangeError(ValueError):
    def __init__(self, year: int) -> None:
        super().__init__(f"year {year} is outside the staged range 1993-2019")
        self.year = year


class Subfield(str, enum.Enum):
    NLP = "NLP"
    KR = "KR"
    PS = "PS"
    IR = "IR"
    RO = "RO"
    IA = "IA"
    CV = "CV"
    DL = "DL"
    ML = "ML"

    @property
    def order(self) -> int:
        return _SUBFIELD_ORDER[self]


_SUBFIELD_ORDER = {s: i for i, s in enumerate(Subfield)}


class Stage(enum.Enum):
    EMBRYO = ("Embryo", 1993, 1999)
    STABLE = ("Stable", 2000, 2007)
    MACHINE_LEARNING = ("MachineLearning", 2008, 2013)
    DEEP_LEARNING = ("DeepLearning", 2014, 2019)

    def __init__(self, label: str, first_year: int, last_year: int) -> None:
        self.label = label
        self.first_year = first_year
        self.last_year = last_year

    @property
    def years(self) -> range:
        return range(self.first_year, self.last_year + 1)

    @classmethod
    def from_label(cls, label: str) -> "Stage":
        for stage in cls:
            if stage.label.lower() == label.lower() or stage.name.lower() == label.lower():
                return stage
        raise ValueError(f"unknown stage {label!r}")


class ImpactTier(str, enum.Enum):
    HIGH = "High"
    MID = "Mid"
    LOW = "Low"


class S2Status(str, enum.Enum):
    PENDING = "pending"
    MATCHED = "matched"
    UNMATCHED = "unmatched"


def parse_instant(text: str) -> datetime:
    """Parse an ISO-8601 instant, requiring an explicit offset, into UTC."""
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise CorpusError(f"unparseable instant {text!r}", "utc-timestamps") from None
    if dt.tzinfo is None:
        raise CorpusError(f"instant {text!r} carries no UTC offset", "utc-timestamps")
    return dt.astimezone(timezone.utc)


def format_instant(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    out = dt.strftime("%Y-%m-%dT%H:%M:%S")
    if dt.microsecond:
        out += f".{dt.microsecond:06d}"
    return out + "Z"


def _utc(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        raise CorpusError(f"naive timestamp {dt!r}; instants must be UTC-aware", "utc-timestamps")
    return dt.astimezone(timezone.utc)


@dataclass(frozen=True, slots=True)
class VersionEvent:
    number: int
    timestamp: datetime

    def __post_init__(self) -> None:
        if self.number < 1:
            raise CorpusError(f"version number {self.number} < 1", "version-numbering")
        object.__setattr__(self, "timestamp", _utc(self.timestamp))


@dataclass(frozen=True, slots=True)
class AuthorRef:
    name: str
    s2_author_id: Optional[str] = None
    influential_citation_count: Optional[int] = None


@dataclass(frozen=True, slots=True)
class AuthorRecord:
    s2_author_id: str
    name: str
    influential_citation_count: int
    preprint_ids: frozenset[str]

    def __post_init__(self) -> None:
        if self.influential_citation_count < 0:
            raise CorpusError("influential_citation_count must be >= 0")
        if not self.preprint_ids:
            raise CorpusError(f"author {self.s2_author_id} has no preprints")


@dataclass(frozen=True, slots=True)
class CitationStub:
    citing_s2_id: str
    year: int
    date: Optional[date] = None

    def __post_init__(self) -> None:
        if self.date is not None and self.date.year != self.year:
            raise CorpusError(
                f"citation {self.citing_s2_id}: date {self.date} outside year {self.year}",
                "citation-date-year",
            )

    @property
    def effective_date(self) -> date:
        """Full date when known, otherwise July 1 of the citation year."""
        return self.date if self.date is not None else date(self.year, 7, 1)


@dataclass(frozen=True, slots=True)
class Enrichment:
    s2_paper_id: str
    topics: tuple[str, ...] = ()
    citation_count: int = 0
    citations: tuple[CitationStub, ...] = ()
    publication_date: Optional[date] = None

    def __post_init__(self) -> None:
        if self.citation_count < 0:
            raise CorpusError("citation_count must be >= 0")
        object.__setattr__(self, "topics", tuple(self.topics))
        object.__setattr__(self, "citations", tuple(self.citations))

    def first_citation_date(self) -> Optional[date]:
        if not self.citations:
            return None
        return min(c.effective_date for c in self.citations)


@dataclass(frozen=True, slots=True)
class PreprintRecord:
    arxiv_id: str
    title: str
    abstract: str
    authors: tuple[AuthorRef, ...]
    categories: frozenset[str]
    versions: tuple[VersionEvent, ...]
    doi: Optional[str] = None
    journal_ref: Optional[str] = None
    enrichment: Optional[Enrichment] = None
    s2_status: S2Status = S2Status.PENDING

    def __post_init__(self) -> None:
        if not self.arxiv_id:
            raise CorpusError("record without arxiv_id")
        object.__setattr__(self, "authors", tuple(self.authors))
        object.__setattr__(self, "categories", frozenset(self.categories))
        versions = tuple(sorted(self.versions, key=lambda v: v.number))
        if not versions:
            raise CorpusError(f"{self.arxiv_id}: empty version list", "versions-non-empty")
        for i, v in enumerate(versions, start=1):
            if v.number != i:
                raise CorpusError(
                    f"{self.arxiv_id}: version numbers are not consecutive from 1",
                    "version-numbering",
                )
        for prev, cur in zip(versions, versions[1:]):
            if cur.timestamp < prev.timestamp:
                raise CorpusError(
                    f"{self.arxiv_id}: v{cur.number} ({format_instant(cur.timestamp)}) "
                    f"precedes v{prev.number} ({format_instant(prev.timestamp)})",
                    "version-timestamps-monotone",
                )
        object.__setattr__(self, "versions", versions)
        status = S2Status(self.s2_status)
        if self.enrichment is not None:
            status = S2Status.MATCHED
        elif status is S2Status.MATCHED:
            raise CorpusError(f"{self.arxiv_id}: matched without enrichment")
        object.__setattr__(self, "s2_status", status)

    @property
    def submitted(self) -> datetime:
        """Initial submission instant (timestamp of version 1)."""
        return self.versions[0].timestamp

    @property
    def last_updated(self) -> datetime:
        return self.versions[-1].timestamp

    @property
    def n_versions(self) -> int:
        return len(self.versions)

    @property
    def author_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a in self.authors:
            if a.s2_author_id:
                seen.setdefault(a.s2_author_id, None)
        return tuple(seen)


@dataclass(frozen=True, slots=True)
class LabeledPreprint:
    record: PreprintRecord
    enrichment: Enrichment
    subfields: frozenset[Subfield]
    impact: ImpactTier
    official: bool
    stage: Stage

    @property
    def arxiv_id(self) -> str:
        return self.record.arxiv_id

    @property
    def submitted(self) -> datetime:
        return self.record.submitted


def stage_of(t: datetime) -> Stage:
    year = t.astimezone(timezone.utc).year if t.tzinfo else t.year
    for stage in Stage:
        if stage.first_year <= year <= stage.last_year:
            return stage
    raise StageRangeError(year)


def official_status(p: PreprintRecord) -> bool:
    return bool((p.doi or "").strip()) or bool((p.journal_ref or "").strip())


# -- line-delimited JSON representation --------------------------------------


def record_to_json(p: PreprintRecord) -> dict[str, Any]:
    authors = []
    for a in p.authors:
        entry: dict[str, Any] = {"name": a.name, "id": a.s2_author_id}
        if a.influential_citation_count is not None:
            entry["influential_citation_count"] = a.influential_citation_count
        authors.append(entry)
    s2: Optional[dict[str, Any]] = None
    if p.enrichment is not None:
        e = p.enrichment
        s2 = {
            "paper_id": e.s2_paper_id,
            "topics": list(e.topics),
            "citation_count": e.citation_count,
            "citations": [
                {"id": c.citing_s2_id, "year": c.year, "date": c.date.isoformat() if c.date else None}
                for c in e.citations
            ],
            "publication_date": e.publication_date.isoformat() if e.publication_date else None,
        }
    return {
        "arxiv_id": p.arxiv_id,
        "title": p.title,
        "abstract": p.abstract,
        "authors": authors,
        "categories": sorted(p.categories),
        "versions": [{"n": v.number, "ts": format_instant(v.timestamp)} for v in p.versions],
        "doi": p.doi,
        "journal_ref": p.journal_ref,
        "s2": s2,
        "s2_status": p.s2_status.value,
    }


def _opt_date(value: Optional[str]) -> Optional[date]:
    return date.fromisoformat(value) if value else None


def record_from_json(obj: dict[str, Any]) -> PreprintRecord:
    try:
        versions = [VersionEvent(int(v["n"]), parse_instant(v["ts"])) for v in obj["versions"]]
        authors = [
            AuthorRef(
                name=a["name"],
                s2_author_id=a.get("id"),
                influential_citation_count=a.get("influential_citation_count"),
            )
            for a in obj.get("authors", [])
        ]
        enrichment = None
        s2 = obj.get("s2")
        if s2 is not None:
            enrichment = Enrichment(
                s2_paper_id=s2["paper_id"],
                topics=tuple(s2.get("topics", [])),
                citation_count=int(s2.get("citation_count", 0)),
                citations=tuple(
                    CitationStub(c["id"], int(c["year"]), _opt_date(c.get("date")))
                    for c in s2.get("citations", [])
                ),
                publication_date=_opt_date(s2.get("publication_date")),
            )
        return PreprintRecord(
            arxiv_id=obj["arxiv_id"],
            title=obj.get("title", ""),
            abstract=obj.get("abstract", ""),
            authors=tuple(authors),
            categories=frozenset(obj.get("categories", [])),
            versions=tuple(versions),
            doi=obj.get("doi"),
            journal_ref=obj.get("journal_ref"),
            enrichment=enrichment,
            s2_status=S2Status(obj.get("s2_status", "matched" if s2 is not None else "pending")),
        )
    except CorpusError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"malformed record: {exc}") from exc


def build_author_records(records: Iterable[PreprintRecord]) -> dict[str, AuthorRecord]:
    """Aggregate author identity across records, keyed by S2 author id.

    The first non-empty name seen wins; the influential citation count is the
    maximum reported across records (upstream values only grow).
    """
    names: dict[str, str] = {}
    icc: dict[str, int] = {}
    papers: dict[str, set[str]] = {}
    for p in records:
        for a in p.authors:
            if not a.s2_author_id:
                continue
            aid = a.s2_author_id
            if a.name and aid not in names:
                names[aid] = a.name
            icc[aid] = max(icc.get(aid, 0), a.influential_citation_count or 0)
            papers.setdefault(aid, set()).add(p.arxiv_id)
    return {
        aid: AuthorRecord(aid, names.get(aid, ""), icc[aid], frozenset(papers[aid]))
        for aid in sorted(papers)
    }
