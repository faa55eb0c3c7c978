from __future__ import annotations

from typing import Iterable, Mapping

from ..corpus import AuthorRecord, ImpactTier


def tier_sizes(n: int) -> tuple[int, int, int]:
    """(high, mid, low) sizes: high = ceil(n/5), low = floor(2n/5)."""
    high = -(-n // 5)
    low = (2 * n) // 5
    return high, n - high - low, low


def assign_impact_tiers(items: Iterable[tuple[str, int]]) -> dict[str, ImpactTier]:
    """Rank by count descending (ties by ascending id) and split 20/40/40.

    The top ``ceil(0.2 n)`` are High, the last ``floor(0.4 n)`` Low, the
    rest Mid. Integer arithmetic keeps the boundaries exact.
    """
    ranked = sorted(items, key=lambda item: (-item[1], item[0]))
    for ident, count in ranked:
        if count < 0:
            raise ValueError(f"negative count for {ident}")
    ids = [ident for ident, _ in ranked]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate ids in tiering input")
    high, mid, _ = tier_sizes(len(ranked))
    tiers: dict[str, ImpactTier] = {}
    for rank, ident in enumerate(ids):
        if rank < high:
            tiers[ident] = ImpactTier.HIGH
        elif rank < high + mid:
            tiers[ident] = ImpactTier.MID
        else:
            tiers[ident] = ImpactTier.LOW
    return tiers


def assign_author_influence_tiers(
    authors: Iterable[AuthorRecord] | Mapping[str, AuthorRecord],
) -> dict[str, ImpactTier]:
    if isinstance(authors, Mapping):
        authors = authors.values()
    return assign_impact_tiers((a.s2_author_id, a.influential_citation_count) for a in authors)
