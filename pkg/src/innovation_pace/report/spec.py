from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Optional

from ..corpus import ImpactTier

SCHEMA_VERSION = "v1"

GRANULARITIES = ("year", "month", "day")
GROUPINGS = ("all", "subfield", "impact", "influence", "official", "stage", "breadth")
METRICS = (
    "count",
    "ati",
    "is",
    "us",
    "new_author_is",
    "first_citation_lag",
    "cited_ratio",
    "version_dist",
    "days_coverage",
    "productivity",
    "versions_vs",
)

# metric -> groupings that correspond to a displayed series
VALID_GROUPINGS: dict[str, tuple[str, ...]] = {
    "count": ("all", "subfield", "impact", "official", "stage"),
    "ati": ("all", "subfield", "impact", "official", "stage"),
    "is": ("all", "subfield", "impact", "official", "stage"),
    "us": ("all", "official"),
    "new_author_is": ("all", "influence", "subfield", "breadth"),
    "first_citation_lag": ("all", "official"),
    "cited_ratio": ("all", "official"),
    "version_dist": ("all", "official"),
    "days_coverage": ("all", "stage"),
    "productivity": ("all",),
    "versions_vs": ("all", "impact"),
}

# metrics defined per calendar year only
YEARLY_ONLY = frozenset(
    {"first_citation_lag", "cited_ratio", "version_dist", "days_coverage", "productivity", "versions_vs"}
)


class UsageError(ValueError):
    pass


def valid_combinations_table() -> str:
    lines = ["valid metric/grouping combinations:"]
    width = max(len(m) for m in METRICS)
    for metric in METRICS:
        note = "  (year granularity only)" if metric in YEARLY_ONLY else ""
        lines.append(f"  {metric:<{width}}  {', '.join(VALID_GROUPINGS[metric])}{note}")
    return "\n".join(lines)


@dataclass(frozen=True)
class ReportSpec:
    corpus: Path
    out: Path
    metric: str
    grouping: str = "all"
    granularity: str = "year"
    svg: bool = False
    from_date: Optional[date] = None
    until_date: Optional[date] = None
    tier: Optional[ImpactTier] = None
    us_divisor: str = "nv"
    lexicon: Optional[Path] = None

    def validate(self) -> "ReportSpec":
        if self.metric not in METRICS:
            raise UsageError(f"unknown metric {self.metric!r}\n{valid_combinations_table()}")
        if self.grouping not in GROUPINGS:
            raise UsageError(f"unknown grouping {self.grouping!r}\n{valid_combinations_table()}")
        if self.granularity not in GRANULARITIES:
            raise UsageError(f"unknown granularity {self.granularity!r}; expected one of {GRANULARITIES}")
        if self.grouping not in VALID_GROUPINGS[self.metric]:
            raise UsageError(
                f"metric {self.metric!r} does not support grouping {self.grouping!r}\n{valid_combinations_table()}"
            )
        if self.metric in YEARLY_ONLY and self.granularity != "year":
            raise UsageError(f"metric {self.metric!r} is defined per year only\n{valid_combinations_table()}")
        if self.us_divisor not in ("nv", "nv-minus-1"):
            raise UsageError(f"unknown update-speed divisor {self.us_divisor!r}")
        if self.from_date and self.until_date and self.from_date > self.until_date:
            raise UsageError("--from must not be after --until")
        return self

    @property
    def stem(self) -> str:
        parts = [self.metric, self.grouping]
        if self.metric not in YEARLY_ONLY and not (self.grouping in ("stage", "breadth")):
            parts.append(self.granularity)
        if self.tier is not None:
            parts.append(self.tier.value.lower())
        if self.metric == "us" and self.us_divisor != "nv":
            parts.append("nvm1")
        return "_".join(parts)


def all_specs(corpus: Path, out: Path, **kwargs) -> list[ReportSpec]:
    """Every valid (metric, grouping) at year granularity."""
    return [
        ReportSpec(corpus=corpus, out=out, metric=m, grouping=g, **kwargs).validate()
        for m in METRICS
        for g in VALID_GROUPINGS[m]
    ]
