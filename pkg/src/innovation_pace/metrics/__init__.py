from .citations import cited_within_ratio, first_citation_lag, first_citation_lag_of
from .indicators import (
    CohortMember,
    EventSeries,
    InsufficientCohort,
    InsufficientEvents,
    PaceSample,
    UpdateCohort,
    ati,
    innovation_speed,
    pace_sample,
    update_speed,
)
from .productivity import productivity_series
from .series import (
    bucket_events,
    by_impact,
    by_official,
    by_stage,
    by_subfield,
    days_coverage,
    new_author_events,
    select_all,
    update_cohorts,
)
from .versions import version_distribution, versions_vs_metric

__all__ = [
    "CohortMember",
    "EventSeries",
    "InsufficientCohort",
    "InsufficientEvents",
    "PaceSample",
    "UpdateCohort",
    "ati",
    "bucket_events",
    "by_impact",
    "by_official",
    "by_stage",
    "by_subfield",
    "cited_within_ratio",
    "days_coverage",
    "first_citation_lag",
    "first_citation_lag_of",
    "innovation_speed",
    "new_author_events",
    "pace_sample",
    "productivity_series",
    "select_all",
    "update_cohorts",
    "update_speed",
    "version_distribution",
    "versions_vs_metric",
]
