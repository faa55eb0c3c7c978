"""Author-to-subfield profiling for prolific authors."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..corpus import AuthorRecord, ImpactTier, LabeledPreprint, Subfield, build_author_records
from .tiers import assign_author_influence_tiers

MIN_PREPRINTS_EXCLUSIVE = 5
BREADTH_CATEGORIES = ("1", "2", "3", "4", "5+")


def breadth_category(n_subfields: int) -> str:
    if n_subfields < 1:
        raise ValueError("an author profile covers at least one subfield")
    return "5+" if n_subfields >= 5 else str(n_subfields)


@dataclass(frozen=True)
class AuthorProfile:
    author: AuthorRecord
    preprint_count: int
    subfield_shares: Mapping[Subfield, float]
    assigned_subfields: frozenset[Subfield]
    breadth: str
    influence_tier: ImpactTier
    first_submission: datetime

    @property
    def author_id(self) -> str:
        return self.author.s2_author_id


def _assign(shares: Mapping[Subfield, Fraction], mean: Mapping[Subfield, Fraction]) -> frozenset[Subfield]:
    above = frozenset(s for s in Subfield if shares[s] > mean[s])
    if above:
        return above
    # Nobody is strictly above average (e.g. a single author, or a specialist
    # in a subfield everyone works in): take the best share/mean ratio,
    # ties going to the earlier subfield in canonical order.
    best: Optional[Subfield] = None
    best_ratio = Fraction(-1)
    for s in Subfield:
        if mean[s] == 0:
            continue
        ratio = shares[s] / mean[s]
        if ratio > best_ratio:
            best, best_ratio = s, ratio
    assert best is not None
    return frozenset({best})


def build_author_profiles(
    corpus: Sequence[LabeledPreprint],
    authors: Optional[Mapping[str, AuthorRecord]] = None,
    influence: Optional[Mapping[str, ImpactTier]] = None,
) -> list[AuthorProfile]:
    """Profile every author with more than five preprints in ``corpus``.

    An author is assigned to each subfield where their share of preprints
    exceeds the mean share over all profiled authors. Authors none of whose
    preprints carry a subfield label have no evidence to profile and are
    skipped. Output is sorted by author id.
    """
    if authors is None:
        authors = build_author_records(lp.record for lp in corpus)
    if influence is None:
        influence = assign_author_influence_tiers(authors)

    papers: dict[str, list[LabeledPreprint]] = {}
    for lp in corpus:
        for aid in lp.record.author_ids:
            papers.setdefault(aid, []).append(lp)

    shares: dict[str, dict[Subfield, Fraction]] = {}
    for aid in sorted(papers):
        mine = papers[aid]
        if len(mine) <= MIN_PREPRINTS_EXCLUSIVE or not any(lp.subfields for lp in mine):
            continue
        n = len(mine)
        shares[aid] = {s: Fraction(sum(1 for lp in mine if s in lp.subfields), n) for s in Subfield}
    if not shares:
        return []

    mean = {s: sum((sh[s] for sh in shares.values()), Fraction(0)) / len(shares) for s in Subfield}

    profiles = []
    for aid, sh in shares.items():
        assigned = _assign(sh, mean)
        record = authors.get(aid) or AuthorRecord(aid, "", 0, frozenset(lp.arxiv_id for lp in papers[aid]))
        profiles.append(
            AuthorProfile(
                author=record,
                preprint_count=len(papers[aid]),
                subfield_shares={s: float(v) for s, v in sh.items()},
                assigned_subfields=assigned,
                breadth=breadth_category(len(assigned)),
                influence_tier=influence.get(aid, ImpactTier.LOW),
                first_submission=min(lp.submitted for lp in papers[aid]),
            )
        )
    return profiles
