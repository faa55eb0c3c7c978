"""Version-count distributions and versions-versus-outcome summaries."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from ..corpus import ImpactTier, LabeledPreprint

VERSION_BINS = ("1", "2", "3", "4+")
VersionMetric = Literal["first_cited_year_offset", "citation_count", "team_size"]
VERSION_METRICS: tuple[str, ...] = ("first_cited_year_offset", "citation_count", "team_size")


def version_bin(n_versions: int) -> str:
    return "4+" if n_versions >= 4 else str(n_versions)


def version_distribution(
    corpus: Sequence[LabeledPreprint], year: Optional[int] = None, by_official: bool = True
) -> dict[tuple[int, Optional[bool]], dict[str, float]]:
    """Share of preprints with 1, 2, 3 and 4+ versions per (year, official group)."""
    counts: dict[tuple[int, Optional[bool]], dict[str, int]] = {}
    for lp in corpus:
        y = lp.submitted.year
        if year is not None and y != year:
            continue
        key = (y, lp.official if by_official else None)
        bins = counts.setdefault(key, {b: 0 for b in VERSION_BINS})
        bins[version_bin(lp.record.n_versions)] += 1
    out = {}
    for key in sorted(counts, key=lambda k: (k[0], k[1] is not None, k[1])):
        total = sum(counts[key].values())
        out[key] = {b: counts[key][b] / total for b in VERSION_BINS}
    return out


def metric_value(lp: LabeledPreprint, metric: str) -> Optional[float]:
    if metric == "first_cited_year_offset":
        first = lp.enrichment.first_citation_date()
        return None if first is None else float(first.year - lp.submitted.year)
    if metric == "citation_count":
        return float(lp.enrichment.citation_count)
    if metric == "team_size":
        return float(len(lp.record.authors))
    raise ValueError(f"unknown metric {metric!r}; expected one of {VERSION_METRICS}")


@dataclass(frozen=True)
class VersionSummary:
    updated_versions: int
    n: int
    q1: float
    median: float
    q3: float


def summarize(values: Sequence[float]) -> tuple[float, float, float]:
    """(first quartile, median, third quartile) with linear interpolation."""
    data = sorted(values)
    if len(data) == 1:
        return data[0], data[0], data[0]
    q1, q2, q3 = statistics.quantiles(data, n=4, method="inclusive")
    return q1, q2, q3


def versions_vs_metric(
    corpus: Sequence[LabeledPreprint],
    metric: str,
    tier: Optional[ImpactTier] = None,
    official: Optional[bool] = None,
) -> list[VersionSummary]:
    """Quartiles of ``metric`` per updated-version count (versions - 1).

    Preprints for which the metric is undefined (no citation for
    ``first_cited_year_offset``) are skipped; empty groups emit no row.
    """
    groups: dict[int, list[float]] = {}
    for lp in corpus:
        if tier is not None and lp.impact is not tier:
            continue
        if official is not None and lp.official is not official:
            continue
        value = metric_value(lp, metric)
        if value is None:
            continue
        groups.setdefault(lp.record.n_versions - 1, []).append(value)
    rows = []
    for updated in sorted(groups):
        q1, med, q3 = summarize(groups[updated])
        rows.append(VersionSummary(updated, len(groups[updated]), q1, med, q3))
    return rows
