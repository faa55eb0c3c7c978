"""Semantic Scholar lookups that enrich harvested preprints.

Papers are resolved by ``arXiv:<id>``. A 404 marks the preprint
``unmatched`` (dropped from analysis); exhausted retries leave it ``pending``
so a later run can pick it up again.
"""

from __future__ import annotations

import json
import logging
import os
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from datetime import date
from typing import Any, Iterable, Optional, Sequence

from ..corpus import AuthorRef, CitationStub, Enrichment, PreprintRecord, S2Status
from .ratelimit import TokenBucket
from .transport import RetryPolicy, Transport, TransportError, send, urllib_transport

log = logging.getLogger(__name__)

S2_ENDPOINT = "https://api.semanticscholar.org/graph/v1"
PAPER_FIELDS = ",".join(
    [
        "title",
        "citationCount",
        "publicationDate",
        "fieldsOfStudy",
        "s2FieldsOfStudy",
        "authors.authorId",
        "authors.name",
        "citations.paperId",
        "citations.year",
        "citations.publicationDate",
    ]
)
AUTHOR_FIELDS = "name,influentialCitationCount"


class S2Error(RuntimeError):
    pass


class _Unmatched:
    _instance: Optional["_Unmatched"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNMATCHED"


UNMATCHED = _Unmatched()


def s2_lookup_key(arxiv_id: str) -> str:
    return f"arXiv:{arxiv_id}"


class S2Client:
    def __init__(
        self,
        transport: Transport = urllib_transport,
        limiter: Optional[TokenBucket] = None,
        api_key: Optional[str] = None,
        endpoint: str = S2_ENDPOINT,
        policy: Optional[RetryPolicy] = None,
        sleep=None,
    ) -> None:
        self.transport = transport
        self.api_key = api_key if api_key is not None else os.environ.get("S2_API_KEY")
        # unauthenticated clients share a much lower quota
        self.limiter = limiter or TokenBucket.min_interval(1.0 if self.api_key else 3.0)
        self.endpoint = endpoint.rstrip("/")
        self.policy = policy
        self._send_kwargs = {} if sleep is None else {"sleep": sleep}

    def _headers(self) -> dict[str, str]:
        return {"x-api-key": self.api_key} if self.api_key else {}

    def _get(self, path: str, params: dict[str, str]) -> Optional[dict[str, Any]]:
        try:
            resp = send(self.transport, self.limiter, "GET", self.endpoint + path, params,
                        headers=self._headers(), policy=self.policy, **self._send_kwargs)
        except TransportError as exc:
            raise S2Error(str(exc)) from exc
        if resp.status == 404:
            return None
        try:
            return json.loads(resp.text)
        except json.JSONDecodeError as exc:
            raise S2Error(f"undecodable response for {path}") from exc

    def paper(self, arxiv_id: str) -> Optional[dict[str, Any]]:
        return self._get(f"/paper/{s2_lookup_key(arxiv_id)}", {"fields": PAPER_FIELDS})

    def author(self, author_id: str) -> Optional[dict[str, Any]]:
        return self._get(f"/author/{author_id}", {"fields": AUTHOR_FIELDS})


def _topics(payload: dict[str, Any]) -> tuple[str, ...]:
    out: dict[str, None] = {}
    for t in payload.get("topics") or []:
        name = t.get("topic") if isinstance(t, dict) else t
        if name:
            out.setdefault(str(name), None)
    for t in payload.get("s2FieldsOfStudy") or []:
        name = t.get("category") if isinstance(t, dict) else t
        if name:
            out.setdefault(str(name), None)
    for name in payload.get("fieldsOfStudy") or []:
        if name:
            out.setdefault(str(name), None)
    return tuple(out)


def _citation(entry: dict[str, Any]) -> Optional[CitationStub]:
    year = entry.get("year")
    if year is None:
        return None
    pub = entry.get("publicationDate")
    d = date.fromisoformat(pub) if pub else None
    if d is not None and d.year != int(year):
        # upstream disagreement: keep the year, drop the date
        d = None
    return CitationStub(str(entry.get("paperId") or ""), int(year), d)


def parse_paper_payload(payload: dict[str, Any]) -> tuple[Enrichment, list[AuthorRef]]:
    citations = [c for c in (_citation(e) for e in payload.get("citations") or []) if c is not None]
    citations.sort(key=lambda c: (c.effective_date, c.citing_s2_id))
    pub = payload.get("publicationDate")
    enrichment = Enrichment(
        s2_paper_id=str(payload.get("paperId") or ""),
        topics=_topics(payload),
        citation_count=int(payload.get("citationCount") or 0),
        citations=tuple(citations),
        publication_date=date.fromisoformat(pub) if pub else None,
    )
    authors = [
        AuthorRef(a.get("name") or "", str(a["authorId"]) if a.get("authorId") else None)
        for a in payload.get("authors") or []
    ]
    return enrichment, authors


def _name_key(name: str) -> str:
    decomposed = unicodedata.normalize("NFKD", name)
    letters = "".join(ch for ch in decomposed if ch.isalnum() or ch.isspace())
    return " ".join(letters.lower().split())


def merge_authors(arxiv_authors: Sequence[AuthorRef], s2_authors: Sequence[AuthorRef]) -> tuple[AuthorRef, ...]:
    """Attach S2 author ids to the arXiv author list.

    Lists of equal length are aligned by position; otherwise names are
    matched on a folded key (accents, punctuation and case removed) and,
    failing that, on surname. Unresolved authors keep ``s2_author_id=None``.
    When the arXiv list is empty the S2 list is adopted as-is.
    """
    if not arxiv_authors:
        return tuple(s2_authors)
    if len(arxiv_authors) == len(s2_authors):
        return tuple(
            replace(a, s2_author_id=s.s2_author_id or a.s2_author_id)
            for a, s in zip(arxiv_authors, s2_authors)
        )
    by_name = {_name_key(s.name): s for s in s2_authors}
    by_surname: dict[str, list[AuthorRef]] = {}
    for s in s2_authors:
        parts = _name_key(s.name).split()
        if parts:
            by_surname.setdefault(parts[-1], []).append(s)
    merged = []
    for a in arxiv_authors:
        key = _name_key(a.name)
        hit = by_name.get(key)
        if hit is None and key:
            candidates = by_surname.get(key.split()[-1], [])
            hit = candidates[0] if len(candidates) == 1 else None
        merged.append(replace(a, s2_author_id=hit.s2_author_id) if hit and hit.s2_author_id else a)
    return tuple(merged)


def enrich_with_s2(p: PreprintRecord, client: S2Client):
    """Return ``(Enrichment, s2 author list)`` for ``p`` or ``UNMATCHED``.

    Raises :class:`S2Error` when the service cannot be reached.
    """
    payload = client.paper(p.arxiv_id)
    if payload is None:
        return UNMATCHED
    return parse_paper_payload(payload)


def _enrich_one(p: PreprintRecord, client: S2Client) -> PreprintRecord:
    try:
        result = enrich_with_s2(p, client)
    except S2Error as exc:
        log.warning("%s left pending: %s", p.arxiv_id, exc)
        return replace(p, enrichment=None, s2_status=S2Status.PENDING)
    if result is UNMATCHED:
        return replace(p, enrichment=None, s2_status=S2Status.UNMATCHED)
    enrichment, s2_authors = result
    return replace(p, enrichment=enrichment, authors=merge_authors(p.authors, s2_authors),
                   s2_status=S2Status.MATCHED)


def enrich_corpus(
    records: Iterable[PreprintRecord],
    client: S2Client,
    refresh: bool = False,
    author_influence: bool = True,
    workers: int = 1,
) -> list[PreprintRecord]:
    """Enrich every pending record (or every record when ``refresh``).

    Workers share the client's rate limiter; results come back in input
    order. With ``author_influence`` each distinct author id is looked up
    once and its influential citation count written onto every AuthorRef.
    """
    records = list(records)
    todo = [i for i, p in enumerate(records) if refresh or p.s2_status is S2Status.PENDING]
    out = list(records)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for i, enriched in zip(todo, pool.map(lambda i: _enrich_one(records[i], client), todo)):
            out[i] = enriched
    if author_influence:
        out = attach_author_influence(out, client, workers=workers)
    return out


def attach_author_influence(
    records: Sequence[PreprintRecord], client: S2Client, workers: int = 1
) -> list[PreprintRecord]:
    ids = sorted({a.s2_author_id for p in records for a in p.authors if a.s2_author_id})

    def lookup(aid: str) -> tuple[str, Optional[int]]:
        try:
            payload = client.author(aid)
        except S2Error as exc:
            log.warning("author %s influence unavailable: %s", aid, exc)
            return aid, None
        if payload is None:
            return aid, None
        return aid, int(payload.get("influentialCitationCount") or 0)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        influence = {aid: icc for aid, icc in pool.map(lookup, ids) if icc is not None}
    return [
        replace(
            p,
            authors=tuple(
                replace(a, influential_citation_count=influence.get(a.s2_author_id, a.influential_citation_count))
                if a.s2_author_id
                else a
                for a in p.authors
            ),
        )
        for p in records
    ]
