"""Citation-timing analytics: first-citation lag and cited-within-window ratio."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Sequence

from ..corpus import LabeledPreprint

DAYS_PER_YEAR = 365.25


def lag_years(submitted: date, cited: date) -> float:
    return (cited - submitted).days / DAYS_PER_YEAR


def first_citation_lag_of(lp: LabeledPreprint) -> Optional[float]:
    """Years from submission to the earliest citation, None if never cited.

    Both ends are compared as UTC calendar dates, since citation dates carry
    no time of day. The result may be negative when upstream dates are noisy.
    """
    first = lp.enrichment.first_citation_date()
    if first is None:
        return None
    return lag_years(lp.submitted.date(), first)


@dataclass(frozen=True)
class LagCell:
    mean_years: Optional[float]
    n: int
    excluded: int = 0


@dataclass
class FirstCitationLag:
    cells: dict[tuple[int, Optional[bool]], LagCell]
    # preprints whose earliest citation predates submission
    data_quality_excluded: list[str] = field(default_factory=list)
    uncited: int = 0


def first_citation_lag(corpus: Sequence[LabeledPreprint], by_official: bool = True) -> FirstCitationLag:
    """Mean first-citation lag per submission year (and official flag).

    Keys are ``(year, official)``, or ``(year, None)`` when
    ``by_official`` is false. Uncited preprints are left out of the means.
    """
    sums: dict[tuple[int, Optional[bool]], list[float]] = {}
    bad: dict[tuple[int, Optional[bool]], int] = {}
    excluded: list[str] = []
    uncited = 0
    for lp in sorted(corpus, key=lambda x: x.arxiv_id):
        key = (lp.submitted.year, lp.official if by_official else None)
        sums.setdefault(key, [])
        lag = first_citation_lag_of(lp)
        if lag is None:
            uncited += 1
            continue
        if lag < 0:
            excluded.append(lp.arxiv_id)
            bad[key] = bad.get(key, 0) + 1
            continue
        sums[key].append(lag)
    cells = {
        key: LagCell(sum(v) / len(v) if v else None, len(v), bad.get(key, 0))
        for key, v in sorted(sums.items(), key=lambda kv: (kv[0][0], kv[0][1] is not None, kv[0][1]))
    }
    return FirstCitationLag(cells, excluded, uncited)


def cited_within(lp: LabeledPreprint, window_years: float) -> bool:
    submitted = lp.submitted.date()
    return any(
        lag_years(submitted, c.effective_date) <= window_years for c in lp.enrichment.citations
    )


def cited_within_ratio(
    corpus: Sequence[LabeledPreprint], window_years: float = 3, by_official: bool = False
) -> dict[tuple[int, Optional[bool]], tuple[float, int]]:
    """Per submission year: (share of preprints cited within the window, n)."""
    groups: dict[tuple[int, Optional[bool]], list[bool]] = {}
    for lp in corpus:
        key = (lp.submitted.year, lp.official if by_official else None)
        groups.setdefault(key, []).append(cited_within(lp, window_years))
    return {
        key: (sum(flags) / len(flags), len(flags))
        for key, flags in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] is not None, kv[0][1]))
    }
