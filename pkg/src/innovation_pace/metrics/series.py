"""Bucketing of corpus events into time series."""

from __future__ import annotations

import calendar
from datetime import date, datetime, timedelta, timezone
from typing import Callable, Iterable, Optional, Sequence

from ..corpus import ImpactTier, LabeledPreprint, PreprintRecord, Stage, Subfield
from .indicators import CohortMember, EventSeries, UpdateCohort

GRANULARITIES = ("year", "month", "day")

Selector = Callable[[LabeledPreprint], bool]


def select_all(lp: LabeledPreprint) -> bool:
    return True


def by_subfield(s: Subfield) -> Selector:
    return lambda lp: s in lp.subfields


def by_impact(tier: ImpactTier) -> Selector:
    return lambda lp: lp.impact is tier


def by_official(flag: bool) -> Selector:
    return lambda lp: lp.official is flag


def by_stage(stage: Stage) -> Selector:
    return lambda lp: lp.stage is stage


def both(a: Selector, b: Selector) -> Selector:
    return lambda lp: a(lp) and b(lp)


def _record(item: LabeledPreprint | PreprintRecord) -> PreprintRecord:
    return item.record if isinstance(item, LabeledPreprint) else item


def bucket_key(t: datetime | date, granularity: str) -> str:
    d = t.astimezone(timezone.utc).date() if isinstance(t, datetime) else t
    if granularity == "year":
        return f"{d.year:04d}"
    if granularity == "month":
        return f"{d.year:04d}-{d.month:02d}"
    if granularity == "day":
        return d.isoformat()
    raise ValueError(f"unknown granularity {granularity!r}; expected one of {GRANULARITIES}")


def bucket_keys(first: date, last: date, granularity: str) -> list[str]:
    """Every bucket key from ``first``'s bucket to ``last``'s, inclusive."""
    if last < first:
        return []
    if granularity == "year":
        return [f"{y:04d}" for y in range(first.year, last.year + 1)]
    if granularity == "month":
        keys = []
        y, m = first.year, first.month
        while (y, m) <= (last.year, last.month):
            keys.append(f"{y:04d}-{m:02d}")
            y, m = (y + 1, 1) if m == 12 else (y, m + 1)
        return keys
    if granularity == "day":
        return [(first + timedelta(days=i)).isoformat() for i in range((last - first).days + 1)]
    raise ValueError(f"unknown granularity {granularity!r}; expected one of {GRANULARITIES}")


def _span(items: Iterable[datetime]) -> Optional[tuple[date, date]]:
    days = [t.astimezone(timezone.utc).date() for t in items]
    if not days:
        return None
    return min(days), max(days)


def bucket_instants(
    instants: Iterable[datetime],
    granularity: str,
    span: Optional[tuple[date, date]] = None,
) -> list[EventSeries]:
    instants = list(instants)
    span = span or _span(instants)
    if span is None:
        return []
    grouped: dict[str, list[datetime]] = {}
    for t in instants:
        grouped.setdefault(bucket_key(t, granularity), []).append(t)
    return [
        EventSeries.of(grouped.get(k, ()), granularity, k)
        for k in bucket_keys(span[0], span[1], granularity)
    ]


def corpus_span(corpus: Iterable[LabeledPreprint | PreprintRecord]) -> Optional[tuple[date, date]]:
    return _span(_record(x).submitted for x in corpus)


def bucket_events(
    corpus: Sequence[LabeledPreprint],
    granularity: str,
    selector: Selector = select_all,
    span: Optional[tuple[date, date]] = None,
) -> list[EventSeries]:
    """Initial-submission instants of selected preprints, one series per bucket.

    Buckets run chronologically over ``span`` (default: the whole corpus's
    submission span), empty buckets included.
    """
    span = span or corpus_span(corpus)
    return bucket_instants((lp.submitted for lp in corpus if selector(lp)), granularity, span)


def stage_events(corpus: Sequence[LabeledPreprint], selector: Selector = select_all) -> list[EventSeries]:
    """One pooled series per development stage."""
    out = []
    for stage in Stage:
        events = [lp.submitted for lp in corpus if lp.stage is stage and selector(lp)]
        out.append(EventSeries.of(events, "stage", stage.label))
    return out


def first_submissions(corpus: Iterable[LabeledPreprint | PreprintRecord]) -> dict[str, datetime]:
    """Earliest initial-submission instant per S2 author id."""
    first: dict[str, datetime] = {}
    for item in corpus:
        p = _record(item)
        for aid in p.author_ids:
            if aid not in first or p.submitted < first[aid]:
                first[aid] = p.submitted
    return first


def new_author_instants(
    corpus: Iterable[LabeledPreprint | PreprintRecord],
    author_filter: Optional[Callable[[str], bool]] = None,
) -> dict[str, datetime]:
    first = first_submissions(corpus)
    if author_filter is None:
        return first
    return {aid: t for aid, t in first.items() if author_filter(aid)}


def new_author_events(
    corpus: Iterable[LabeledPreprint | PreprintRecord],
    year: int,
    author_filter: Optional[Callable[[str], bool]] = None,
) -> EventSeries:
    """First-submission instants of the authors whose first preprint falls in ``year``."""
    firsts = new_author_instants(corpus, author_filter)
    return EventSeries.of(
        (t for t in firsts.values() if t.astimezone(timezone.utc).year == year), "year", f"{year:04d}"
    )


def first_preprint_subfields(corpus: Sequence[LabeledPreprint]) -> dict[str, frozenset[Subfield]]:
    """Subfields of the preprint(s) at each author's first-submission instant."""
    first = first_submissions(corpus)
    labels: dict[str, set[Subfield]] = {aid: set() for aid in first}
    for lp in corpus:
        for aid in lp.record.author_ids:
            if lp.submitted == first[aid]:
                labels[aid] |= lp.subfields
    return {aid: frozenset(v) for aid, v in labels.items()}


def update_cohorts(
    corpus: Sequence[LabeledPreprint],
    granularity: str = "year",
    selector: Selector = select_all,
    span: Optional[tuple[date, date]] = None,
) -> list[UpdateCohort]:
    """Updated preprints (two or more versions) bucketed by initial submission."""
    span = span or corpus_span(corpus)
    if span is None:
        return []
    grouped: dict[str, list[CohortMember]] = {}
    for lp in corpus:
        p = lp.record
        if p.n_versions < 2 or not selector(lp):
            continue
        grouped.setdefault(bucket_key(p.submitted, granularity), []).append(
            CohortMember.of(p.submitted, p.last_updated, p.n_versions, p.arxiv_id)
        )
    return [UpdateCohort(tuple(grouped.get(k, ())), k) for k in bucket_keys(span[0], span[1], granularity)]


def days_in_year(year: int) -> int:
    return 366 if calendar.isleap(year) else 365


def days_coverage(corpus: Iterable[LabeledPreprint | PreprintRecord], period: int | Stage) -> float:
    """Share of a year's days with at least one initial submission.

    For a :class:`Stage`, the unweighted mean of its yearly shares.
    """
    items = list(corpus)
    if isinstance(period, Stage):
        yearly = [days_coverage(items, y) for y in period.years]
        return sum(yearly) / len(yearly)
    year = int(period)
    days = {
        _record(x).submitted.astimezone(timezone.utc).date()
        for x in items
        if _record(x).submitted.astimezone(timezone.utc).year == year
    }
    return len(days) / days_in_year(year)
