"""arXiv OAI-PMH harvesting (``arXivRaw`` metadata format).

``arXivRaw`` is the only arXiv OAI format that carries the full version
history with second-resolution timestamps, e.g.::

    <version version="v2"><date>Tue, 3 Apr 2007 10:11:12 GMT</date>...</version>
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date, timezone
from email.utils import parsedate_to_datetime
from typing import Iterator, Optional

from ..corpus import AuthorRef, CorpusError, PreprintRecord, VersionEvent
from .ratelimit import TokenBucket
from .transport import RetryPolicy, Transport, TransportError, send, urllib_transport

log = logging.getLogger(__name__)

OAI_ENDPOINT = "https://export.arxiv.org/oai2"
OAI_NS = "{http://www.openarchives.org/OAI/2.0/}"
RAW_NS = "{http://arxiv.org/OAI/arXivRaw/}"

# cs.AI, cs.CL, cs.CV, cs.LG ("machine reading" has no arXiv category),
# cs.NE, cs.RO, cs.MA, cs.IR
AI_CATEGORIES = frozenset({"cs.AI", "cs.CL", "cs.CV", "cs.LG", "cs.NE", "cs.RO", "cs.MA", "cs.IR"})


class ParseError(ValueError):
    def __init__(self, message: str, record_id: Optional[str] = None, field_name: Optional[str] = None):
        super().__init__(message)
        self.record_id = record_id
        self.field_name = field_name


class HarvestError(RuntimeError):
    """Harvest aborted; ``resumption_token`` (possibly None) restarts it."""

    def __init__(self, message: str, resumption_token: Optional[str]) -> None:
        super().__init__(f"{message} (resume with token {resumption_token!r})")
        self.resumption_token = resumption_token


@dataclass(frozen=True)
class HarvestSpec:
    categories: frozenset[str]
    from_date: date
    until_date: date
    rate_limit: float = 3.0
    oai_set: str = "cs"
    # OAI from/until filter on the record datestamp (last metadata change),
    # not on submission; arXiv re-stamped old records, so these default to
    # an unbounded window and submission dates are filtered client-side.
    datestamp_from: Optional[date] = None
    datestamp_until: Optional[date] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", frozenset(self.categories))
        if not self.categories:
            raise ValueError("HarvestSpec.categories must be non-empty")
        if self.from_date > self.until_date:
            raise ValueError("HarvestSpec.from_date must not be after until_date")
        if self.rate_limit <= 0:
            raise ValueError("HarvestSpec.rate_limit must be positive")


def _text(elem: Optional[ET.Element]) -> Optional[str]:
    if elem is None or elem.text is None:
        return None
    return " ".join(elem.text.split())


def split_authors(raw: str) -> list[str]:
    """Split an arXiv author string on commas and ``and``.

    Parenthesised affiliations are dropped, commas inside them ignored.
    """
    parts: list[str] = []
    depth = 0
    buf: list[str] = []
    for ch in raw:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    names: list[str] = []
    for part in parts:
        part = re.sub(r"\([^()]*\)", " ", part)
        for name in re.split(r"(?:^|\s+)and\s+", part.strip()):
            name = " ".join(name.split())
            if name:
                names.append(name)
    return names


def _raw_root(raw: ET.Element | str | bytes) -> ET.Element:
    if isinstance(raw, (str, bytes)):
        raw = ET.fromstring(raw)
    if raw.tag == f"{RAW_NS}arXivRaw":
        return raw
    found = raw.find(f".//{RAW_NS}arXivRaw")
    if found is None:
        header_id = _text(raw.find(f".//{OAI_NS}identifier"))
        raise ParseError(f"record {header_id}: no arXivRaw metadata", header_id, "metadata")
    return found


def parse_arxiv_record(raw: ET.Element | str | bytes) -> PreprintRecord:
    """Convert one ``arXivRaw`` record (or its enclosing OAI ``<record>``)."""
    root = _raw_root(raw)
    arxiv_id = _text(root.find(f"{RAW_NS}id"))
    if not arxiv_id:
        raise ParseError("record without <id>", None, "id")

    versions: list[VersionEvent] = []
    for v in root.findall(f"{RAW_NS}version"):
        label = v.get("version", "")
        m = re.fullmatch(r"v(\d+)", label)
        if m is None:
            raise ParseError(f"{arxiv_id}: bad version label {label!r}", arxiv_id, "version")
        stamp = _text(v.find(f"{RAW_NS}date"))
        try:
            ts = parsedate_to_datetime(stamp or "")
        except (TypeError, ValueError):
            ts = None
        if ts is None or ts.tzinfo is None:
            raise ParseError(f"{arxiv_id}: malformed timestamp {stamp!r} in {label}", arxiv_id, "version.date")
        versions.append(VersionEvent(int(m.group(1)), ts.astimezone(timezone.utc)))
    if not versions:
        raise ParseError(f"{arxiv_id}: no <version> entries", arxiv_id, "version")

    authors = tuple(AuthorRef(name) for name in split_authors(_text(root.find(f"{RAW_NS}authors")) or ""))
    try:
        return PreprintRecord(
            arxiv_id=arxiv_id,
            title=_text(root.find(f"{RAW_NS}title")) or "",
            abstract=_text(root.find(f"{RAW_NS}abstract")) or "",
            authors=authors,
            categories=frozenset((_text(root.find(f"{RAW_NS}categories")) or "").split()),
            versions=tuple(versions),
            doi=_text(root.find(f"{RAW_NS}doi")),
            journal_ref=_text(root.find(f"{RAW_NS}journal-ref")),
        )
    except CorpusError as exc:
        raise ParseError(f"{arxiv_id}: {exc}", arxiv_id, "version") from exc


def parse_list_records(xml_text: str, strict: bool = True) -> tuple[list[PreprintRecord], Optional[str]]:
    """Parse one ListRecords page into (records, next resumption token).

    With ``strict`` off, records that fail to parse are logged and skipped
    instead of failing the whole page.
    """
    root = ET.fromstring(xml_text)
    error = root.find(f"{OAI_NS}error")
    if error is not None:
        if error.get("code") == "noRecordsMatch":
            return [], None
        raise ParseError(f"OAI error {error.get('code')}: {_text(error)}")
    list_records = root.find(f"{OAI_NS}ListRecords")
    if list_records is None:
        raise ParseError("response has neither ListRecords nor error")
    records = []
    for rec in list_records.findall(f"{OAI_NS}record"):
        header = rec.find(f"{OAI_NS}header")
        if header is not None and header.get("status") == "deleted":
            continue
        try:
            records.append(parse_arxiv_record(rec))
        except ParseError as exc:
            if strict:
                raise
            log.warning("skipping record: %s", exc)
    token_elem = list_records.find(f"{OAI_NS}resumptionToken")
    token = _text(token_elem) if token_elem is not None else None
    return records, token or None


def _wanted(p: PreprintRecord, spec: HarvestSpec) -> bool:
    return bool(p.categories & spec.categories) and spec.from_date <= p.submitted.date() <= spec.until_date


def harvest(
    spec: HarvestSpec,
    transport: Transport = urllib_transport,
    limiter: Optional[TokenBucket] = None,
    resume_token: Optional[str] = None,
    policy: Optional[RetryPolicy] = None,
    endpoint: str = OAI_ENDPOINT,
    sleep=None,
    on_page=None,
) -> Iterator[PreprintRecord]:
    """Yield every record in ``spec``'s category set and submission window.

    Pages are followed via resumption tokens until exhausted. On a persistent
    transport failure a :class:`HarvestError` carrying the token of the page
    that failed is raised, so ``harvest(spec, resume_token=err.resumption_token)``
    continues where the run stopped. ``on_page(token)`` is called after each
    page with the token for the next one.
    """
    limiter = limiter or TokenBucket.min_interval(spec.rate_limit)
    kwargs = {} if sleep is None else {"sleep": sleep}
    token = resume_token
    while True:
        if token:
            params = {"verb": "ListRecords", "resumptionToken": token}
        else:
            params = {"verb": "ListRecords", "metadataPrefix": "arXivRaw", "set": spec.oai_set}
            if spec.datestamp_from:
                params["from"] = spec.datestamp_from.isoformat()
            if spec.datestamp_until:
                params["until"] = spec.datestamp_until.isoformat()
        try:
            resp = send(transport, limiter, "GET", endpoint, params, policy=policy,
                        ok_status=frozenset({200}), **kwargs)
        except TransportError as exc:
            raise HarvestError(str(exc), token) from exc
        records, next_token = parse_list_records(resp.text, strict=False)
        for p in records:
            if _wanted(p, spec):
                yield p
        if on_page is not None:
            on_page(next_token)
        if not next_token:
            return
        token = next_token
