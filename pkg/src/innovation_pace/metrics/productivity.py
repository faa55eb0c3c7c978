from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional, Sequence

from ..corpus import LabeledPreprint
from .series import first_submissions

OLD_AUTHOR_CUTOFF = datetime(2000, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class ProductivityRow:
    year: int
    n_preprints: int
    authors_per_preprint: Optional[float]
    preprints_per_author: Optional[float]
    preprints_per_old_author: Optional[float]
    preprints_per_new_author: Optional[float]
    n_active_authors: int
    n_active_old: int
    n_active_new: int


def _mean_per_author(counts: dict[str, int], ids) -> Optional[float]:
    ids = list(ids)
    if not ids:
        return None
    return sum(counts[a] for a in ids) / len(ids)


def productivity_series(
    corpus: Sequence[LabeledPreprint], old_cutoff: datetime = OLD_AUTHOR_CUTOFF
) -> list[ProductivityRow]:
    """Team size and per-author output per submission year.

    Team size counts every listed author; per-author output counts only
    authors with an S2 id, over the authors active in that year. An author
    is "old" when their first preprint in the corpus predates ``old_cutoff``.
    """
    firsts = first_submissions(corpus)
    by_year: dict[int, list[LabeledPreprint]] = {}
    for lp in corpus:
        by_year.setdefault(lp.submitted.year, []).append(lp)
    rows = []
    for year in sorted(by_year):
        papers = by_year[year]
        counts: dict[str, int] = {}
        for lp in papers:
            for aid in lp.record.author_ids:
                counts[aid] = counts.get(aid, 0) + 1
        old = [a for a in sorted(counts) if firsts[a] < old_cutoff]
        new = [a for a in sorted(counts) if firsts[a] >= old_cutoff]
        rows.append(
            ProductivityRow(
                year=year,
                n_preprints=len(papers),
                authors_per_preprint=sum(len(lp.record.authors) for lp in papers) / len(papers),
                preprints_per_author=_mean_per_author(counts, counts),
                preprints_per_old_author=_mean_per_author(counts, old),
                preprints_per_new_author=_mean_per_author(counts, new),
                n_active_authors=len(counts),
                n_active_old=len(old),
                n_active_new=len(new),
            )
        )
    return rows
