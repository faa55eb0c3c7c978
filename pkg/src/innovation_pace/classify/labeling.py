from __future__ import annotations

import logging
from typing import Iterable, Optional

from ..corpus import LabeledPreprint, PreprintRecord, StageRangeError, official_status, stage_of
from .lexicon import ClueLexicon, classify_preprint, load_lexicon
from .tiers import assign_impact_tiers

log = logging.getLogger(__name__)


def label_corpus(records: Iterable[PreprintRecord], lexicon: Optional[ClueLexicon] = None) -> list[LabeledPreprint]:
    """Attach subfields, impact tier, official flag and stage to matched records.

    Records without Semantic Scholar enrichment (unmatched or pending) are
    left out, as are records submitted outside 1993-2019. Impact tiers are
    ranked over the records that remain.
    """
    lexicon = lexicon or load_lexicon()
    kept = []
    for p in records:
        if p.enrichment is None:
            continue
        try:
            stage = stage_of(p.submitted)
        except StageRangeError as exc:
            log.warning("%s dropped: %s", p.arxiv_id, exc)
            continue
        kept.append((p, stage))
    tiers = assign_impact_tiers((p.arxiv_id, p.enrichment.citation_count) for p, _ in kept)
    return [
        LabeledPreprint(
            record=p,
            enrichment=p.enrichment,
            subfields=classify_preprint(p.enrichment.topics, lexicon),
            impact=tiers[p.arxiv_id],
            official=official_status(p),
            stage=stage,
        )
        for p, stage in kept
    ]
