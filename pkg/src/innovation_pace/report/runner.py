"""Turns a labelled corpus into the CSV tables behind each chart."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from ..classify import AuthorProfile, BREADTH_CATEGORIES, build_author_profiles, label_corpus, load_lexicon
from ..classify.tiers import assign_author_influence_tiers
from ..corpus import ImpactTier, LabeledPreprint, PreprintRecord, Stage, Subfield, build_author_records
from ..ingest.store import load_corpus
from ..metrics import indicators as ind
from ..metrics import series as ser
from ..metrics.citations import cited_within_ratio, first_citation_lag
from ..metrics.productivity import productivity_series
from ..metrics.versions import VERSION_BINS, VERSION_METRICS, version_distribution, versions_vs_metric
from .spec import ReportSpec, UsageError
from .svg import write_svg
from .table import Table

log = logging.getLogger(__name__)

Group = tuple[str, ser.Selector]


@dataclass
class Context:
    labeled: list[LabeledPreprint]
    span: Optional[tuple[date, date]]
    influence: dict[str, ImpactTier]
    profiles: dict[str, AuthorProfile]

    @property
    def years(self) -> list[int]:
        if self.span is None:
            return []
        return list(range(self.span[0].year, self.span[1].year + 1))


def build_context(
    records: Sequence[PreprintRecord],
    lexicon_path: Optional[Path] = None,
    from_date: Optional[date] = None,
    until_date: Optional[date] = None,
) -> Context:
    """Label the corpus, then restrict it to the submission window.

    Impact and influence tiers are ranked over the whole matched corpus
    before the window is applied, so a window never re-ranks preprints.
    """
    lexicon = load_lexicon(lexicon_path)
    labeled = label_corpus(records, lexicon)
    authors = build_author_records(lp.record for lp in labeled)
    influence = assign_author_influence_tiers(authors)
    profiles = {p.author_id: p for p in build_author_profiles(labeled, authors, influence)}
    if from_date or until_date:
        labeled = [
            lp for lp in labeled
            if (from_date is None or lp.submitted.date() >= from_date)
            and (until_date is None or lp.submitted.date() <= until_date)
        ]
    span = ser.corpus_span(labeled)
    if span is not None and (from_date or until_date):
        span = (from_date or span[0], until_date or span[1])
    return Context(labeled, span, influence, profiles)


def _tiers(tier: Optional[ImpactTier]) -> ser.Selector:
    return ser.select_all if tier is None else ser.by_impact(tier)


def preprint_groups(grouping: str) -> list[Group]:
    if grouping == "all":
        return [("all", ser.select_all)]
    if grouping == "subfield":
        return [(s.value, ser.by_subfield(s)) for s in Subfield]
    if grouping == "impact":
        return [(t.value.lower(), ser.by_impact(t)) for t in ImpactTier]
    if grouping == "official":
        return [("official", ser.by_official(True)), ("unofficial", ser.by_official(False))]
    raise UsageError(f"grouping {grouping!r} does not split preprints")


def _year_rows(ctx: Context) -> list[str]:
    return [f"{y:04d}" for y in ctx.years]


# -- preprint pace -----------------------------------------------------------


def _pace_value(series: ind.EventSeries, metric: str) -> Optional[float]:
    sample = ind.pace_sample(series)
    if not sample.defined:
        return None
    return sample.ati_hours if metric == "ati" else sample.is_per_hour


def _value_name(metric: str) -> str:
    return {"ati": "ati_hours", "is": "is_per_hour", "us": "us_per_hour", "new_author_is": "is_per_hour"}[metric]


def table_pace(ctx: Context, spec: ReportSpec) -> Table:
    """count / ati / is over time buckets or pooled per stage."""
    base = _tiers(spec.tier)
    metric = spec.metric
    if spec.grouping == "stage":
        return _table_stage(ctx, spec, base)
    groups = preprint_groups(spec.grouping)
    per_group = [
        ser.bucket_events(ctx.labeled, spec.granularity, ser.both(base, sel), ctx.span) for _, sel in groups
    ]
    header = [spec.granularity]
    values = []
    for name, _ in groups:
        header.append(f"{name}_n")
        if metric != "count":
            header.append(f"{name}_{_value_name(metric)}")
            values.append(f"{name}_{_value_name(metric)}")
        else:
            values.append(f"{name}_n")
    table = Table(spec.stem, metric, header, value_columns=values)
    keys = [s.key for s in per_group[0]] if per_group and per_group[0] else []
    for i, key in enumerate(keys):
        row: list = [key]
        for buckets in per_group:
            row.append(buckets[i].m)
            if metric != "count":
                row.append(_pace_value(buckets[i], metric))
        table.rows.append(row)
    return table


def _table_stage(ctx: Context, spec: ReportSpec, base: ser.Selector) -> Table:
    metric = spec.metric
    if metric == "count":
        header = ["stage", "first_year", "last_year", "n_preprints", "preprints_per_year", "preprints_per_month"]
        table = Table(spec.stem, metric, header, value_columns=["preprints_per_year"])
        for stage in Stage:
            n = sum(1 for lp in ctx.labeled if lp.stage is stage and base(lp))
            years = len(stage.years)
            table.rows.append([stage.label, stage.first_year, stage.last_year, n, n / years, n / (12 * years)])
        return table
    groups: list[Group] = [("all", ser.select_all)] + preprint_groups("subfield")
    header = ["stage"]
    values = []
    for name, _ in groups:
        header += [f"{name}_n", f"{name}_{_value_name(metric)}"]
        values.append(f"{name}_{_value_name(metric)}")
    table = Table(spec.stem, metric, header, value_columns=values)
    pooled = [ser.stage_events(ctx.labeled, ser.both(base, sel)) for _, sel in groups]
    for i, stage in enumerate(Stage):
        row: list = [stage.label]
        for per_stage in pooled:
            row += [per_stage[i].m, _pace_value(per_stage[i], metric)]
        table.rows.append(row)
    return table


def table_update_speed(ctx: Context, spec: ReportSpec) -> Table:
    base = _tiers(spec.tier)
    groups = preprint_groups(spec.grouping)
    cohorts = [
        ser.update_cohorts(ctx.labeled, spec.granularity, ser.both(base, sel), ctx.span) for _, sel in groups
    ]
    header = [spec.granularity]
    for name, _ in groups:
        header += [f"{name}_n", f"{name}_us_per_hour"]
    table = Table(spec.stem, "us", header, value_columns=[f"{n}_us_per_hour" for n, _ in groups])
    keys = [c.key for c in cohorts[0]] if cohorts and cohorts[0] else []
    for i, key in enumerate(keys):
        row: list = [key]
        for per_group in cohorts:
            cohort = per_group[i]
            us = ind.update_speed(cohort, spec.us_divisor) if len(cohort) >= 2 else None
            row += [len(cohort), us]
        table.rows.append(row)
    return table


# -- authors -----------------------------------------------------------------


def author_groups(ctx: Context, grouping: str) -> list[tuple[str, Callable[[str], bool]]]:
    if grouping == "all":
        return [("all", lambda aid: True)]
    if grouping == "influence":
        return [(t.value.lower(), (lambda t: lambda aid: ctx.influence.get(aid) is t)(t)) for t in ImpactTier]
    if grouping == "subfield":
        firsts = ser.first_preprint_subfields(ctx.labeled)
        return [(s.value, (lambda s: lambda aid: s in firsts.get(aid, ()))(s)) for s in Subfield]
    if grouping == "breadth":
        return [
            (f"breadth_{b}", (lambda b: lambda aid: aid in ctx.profiles and ctx.profiles[aid].breadth == b)(b))
            for b in BREADTH_CATEGORIES
        ]
    raise UsageError(f"grouping {grouping!r} does not split authors")


def table_new_authors(ctx: Context, spec: ReportSpec) -> Table:
    firsts = ser.first_submissions(ctx.labeled)
    groups = author_groups(ctx, spec.grouping)
    header = ["stage" if spec.grouping == "breadth" else spec.granularity]
    for name, _ in groups:
        header += [f"{name}_n", f"{name}_is_per_hour"]
    table = Table(spec.stem, "new_author_is", header, value_columns=[f"{n}_is_per_hour" for n, _ in groups])
    if spec.grouping == "breadth":
        for stage in Stage:
            row: list = [stage.label]
            for _, keep in groups:
                s = ind.EventSeries.of(
                    t for aid, t in firsts.items() if keep(aid) and stage.first_year <= t.year <= stage.last_year
                )
                row += [s.m, _pace_value(s, "is")]
            table.rows.append(row)
        return table
    per_group = [
        ser.bucket_instants([t for aid, t in sorted(firsts.items()) if keep(aid)], spec.granularity, ctx.span)
        for _, keep in groups
    ]
    keys = [s.key for s in per_group[0]] if per_group and per_group[0] else []
    for i, key in enumerate(keys):
        row = [key]
        for buckets in per_group:
            row += [buckets[i].m, _pace_value(buckets[i], "is")]
        table.rows.append(row)
    return table


# -- trial and error ---------------------------------------------------------


def _group_names(by_official: bool) -> list[tuple[str, Optional[bool]]]:
    return [("official", True), ("unofficial", False)] if by_official else [("all", None)]


def table_first_citation_lag(ctx: Context, spec: ReportSpec) -> Table:
    by_official = spec.grouping == "official"
    result = first_citation_lag(ctx.labeled, by_official=by_official)
    names = _group_names(by_official)
    header = ["year"]
    for name, _ in names:
        header += [f"{name}_n", f"{name}_mean_lag_years", f"{name}_excluded"]
    table = Table(spec.stem, spec.metric, header, value_columns=[f"{n}_mean_lag_years" for n, _ in names])
    for key in _year_rows(ctx):
        row: list = [key]
        for _, flag in names:
            cell = result.cells.get((int(key), flag))
            row += [cell.n, cell.mean_years, cell.excluded] if cell else [0, None, 0]
        table.rows.append(row)
    return table


def table_cited_ratio(ctx: Context, spec: ReportSpec) -> Table:
    by_official = spec.grouping == "official"
    result = cited_within_ratio(ctx.labeled, 3, by_official=by_official)
    names = _group_names(by_official)
    header = ["year"]
    for name, _ in names:
        header += [f"{name}_n", f"{name}_cited_within_3y"]
    table = Table(spec.stem, spec.metric, header, value_columns=[f"{n}_cited_within_3y" for n, _ in names])
    for key in _year_rows(ctx):
        row: list = [key]
        for _, flag in names:
            cell = result.get((int(key), flag))
            row += [cell[1], cell[0]] if cell else [0, None]
        table.rows.append(row)
    return table


def table_version_dist(ctx: Context, spec: ReportSpec) -> Table:
    by_official = spec.grouping == "official"
    dist = version_distribution(ctx.labeled, by_official=by_official)
    counts: dict[tuple[int, Optional[bool]], int] = {}
    for lp in ctx.labeled:
        key = (lp.submitted.year, lp.official if by_official else None)
        counts[key] = counts.get(key, 0) + 1
    names = _group_names(by_official)
    bins = [b.replace("+", "plus") for b in VERSION_BINS]
    header = ["year"]
    for name, _ in names:
        header += [f"{name}_n"] + [f"{name}_v{b}" for b in bins]
    table = Table(spec.stem, spec.metric, header, value_columns=[f"{n}_v1" for n, _ in names])
    for key in _year_rows(ctx):
        row: list = [key]
        for _, flag in names:
            shares = dist.get((int(key), flag))
            row.append(counts.get((int(key), flag), 0))
            row += [shares[b] for b in VERSION_BINS] if shares else [None] * len(VERSION_BINS)
        table.rows.append(row)
    return table


def table_days_coverage(ctx: Context, spec: ReportSpec) -> Table:
    if spec.grouping == "stage":
        table = Table(spec.stem, spec.metric, ["stage", "first_year", "last_year", "coverage"],
                      value_columns=["coverage"])
        for stage in Stage:
            table.rows.append([stage.label, stage.first_year, stage.last_year, ser.days_coverage(ctx.labeled, stage)])
        return table
    table = Table(spec.stem, spec.metric, ["year", "active_days", "days_in_year", "coverage"],
                  value_columns=["coverage"])
    for year in ctx.years:
        cov = ser.days_coverage(ctx.labeled, year)
        total = ser.days_in_year(year)
        table.rows.append([f"{year:04d}", round(cov * total), total, cov])
    return table


def table_productivity(ctx: Context, spec: ReportSpec) -> Table:
    header = ["year", "n_preprints", "authors_per_preprint", "preprints_per_author",
              "preprints_per_old_author", "preprints_per_new_author",
              "n_active_authors", "n_active_old", "n_active_new"]
    table = Table(spec.stem, spec.metric, header,
                  value_columns=["authors_per_preprint", "preprints_per_author",
                                 "preprints_per_old_author", "preprints_per_new_author"])
    rows = {r.year: r for r in productivity_series(ctx.labeled)}
    for year in ctx.years:
        r = rows.get(year)
        if r is None:
            table.rows.append([f"{year:04d}", 0, None, None, None, None, 0, 0, 0])
            continue
        table.rows.append([f"{year:04d}", r.n_preprints, r.authors_per_preprint, r.preprints_per_author,
                           r.preprints_per_old_author, r.preprints_per_new_author,
                           r.n_active_authors, r.n_active_old, r.n_active_new])
    return table


# Citation outcomes are summarised over officially published preprints;
# team size over every preprint.
VERSIONS_VS_OFFICIAL = {"first_cited_year_offset": True, "citation_count": True, "team_size": None}


def tables_versions_vs(ctx: Context, spec: ReportSpec) -> list[Table]:
    tiers: list[tuple[str, Optional[ImpactTier]]] = (
        [(t.value.lower(), t) for t in ImpactTier] if spec.grouping == "impact" else [("all", None)]
    )
    tables = []
    for metric in VERSION_METRICS:
        official = VERSIONS_VS_OFFICIAL[metric]
        summaries = {name: {s.updated_versions: s for s in versions_vs_metric(ctx.labeled, metric, tier, official)}
                     for name, tier in tiers}
        header = ["updated_versions"]
        for name, _ in tiers:
            header += [f"{name}_n", f"{name}_q1", f"{name}_median", f"{name}_q3"]
        table = Table(f"versions_vs_{metric}_{spec.grouping}", f"versions_vs.{metric}", header,
                      value_columns=[f"{n}_median" for n, _ in tiers])
        for updated in sorted({u for per in summaries.values() for u in per}):
            row: list = [updated]
            for name, _ in tiers:
                s = summaries[name].get(updated)
                row += [s.n, s.q1, s.median, s.q3] if s else [0, None, None, None]
            table.rows.append(row)
        tables.append(table)
    return tables


def build_tables(ctx: Context, spec: ReportSpec) -> list[Table]:
    if spec.tier is not None and spec.metric not in ("count", "ati", "is", "us"):
        raise UsageError(f"--tier applies to count/ati/is/us only, not {spec.metric!r}")
    m = spec.metric
    if m in ("count", "ati", "is"):
        return [table_pace(ctx, spec)]
    if m == "us":
        return [table_update_speed(ctx, spec)]
    if m == "new_author_is":
        return [table_new_authors(ctx, spec)]
    if m == "first_citation_lag":
        return [table_first_citation_lag(ctx, spec)]
    if m == "cited_ratio":
        return [table_cited_ratio(ctx, spec)]
    if m == "version_dist":
        return [table_version_dist(ctx, spec)]
    if m == "days_coverage":
        return [table_days_coverage(ctx, spec)]
    if m == "productivity":
        return [table_productivity(ctx, spec)]
    if m == "versions_vs":
        return tables_versions_vs(ctx, spec)
    raise UsageError(f"unknown metric {m!r}")


def run_specs(specs: Iterable[ReportSpec], records: Optional[Sequence[PreprintRecord]] = None) -> list[Path]:
    """Run several specs that share corpus, lexicon and window."""
    specs = [s.validate() for s in specs]
    if not specs:
        return []
    first = specs[0]
    if records is None:
        records = load_corpus(first.corpus)
    ctx = build_context(records, first.lexicon, first.from_date, first.until_date)
    written: list[Path] = []
    for spec in specs:
        for table in build_tables(ctx, spec):
            written.append(table.write(spec.out))
            if spec.svg:
                written.append(write_svg(table, spec.out))
    return written


def run(spec: ReportSpec) -> list[Path]:
    return run_specs([spec])
