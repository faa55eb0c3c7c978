"""Invariant suite run by ``innovation-pace selfcheck``.

Each check recomputes a quantity through an independent route (plain
datetime arithmetic, a literal double loop) and compares it with the
production code path.
"""

from __future__ import annotations

import filecmp
import json
import math
import tempfile
from collections import Counter
from dataclasses import dataclass
from datetime import timezone
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence

from ..classify import load_lexicon, tier_sizes
from ..corpus import CorpusError, ImpactTier, PreprintRecord, StageRangeError, stage_of
from ..ingest.store import load_corpus
from ..metrics import indicators as ind
from ..metrics import series as ser
from .runner import Context, build_context, run_specs
from .spec import all_specs

REL_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    invariant: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        tail = f" detail={json.dumps(self.detail)}" if self.detail else ""
        return f"selfcheck: invariant={self.invariant} status={status}{tail}"


def bundled_fixture() -> Path:
    return Path(str(resources.files("innovation_pace.data").joinpath("fixtures", "corpus.jsonl")))


def manifest_path(corpus: Path) -> Path:
    return corpus.with_name(corpus.stem + ".manifest.json")


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=1e-12)


def check_stage_range(records: Sequence[PreprintRecord]) -> CheckResult:
    for p in records:
        try:
            stage_of(p.submitted)
        except StageRangeError:
            return CheckResult("stage-range", False, f"{p.arxiv_id} submitted {p.submitted.year}")
    return CheckResult("stage-range", True)


def check_manifest(records: Sequence[PreprintRecord], corpus: Path) -> Optional[CheckResult]:
    path = manifest_path(corpus)
    if not path.exists():
        return None
    expected = json.loads(path.read_text(encoding="utf-8"))["daily_counts"]
    actual = Counter(p.submitted.astimezone(timezone.utc).date().isoformat() for p in records)
    for day in sorted(set(expected) | set(actual)):
        if expected.get(day, 0) != actual.get(day, 0):
            return CheckResult(
                "manifest-daily-counts", False,
                f"{day}: manifest {expected.get(day, 0)}, corpus {actual.get(day, 0)}",
            )
    return CheckResult("manifest-daily-counts", True)


def check_telescoping(ctx: Context) -> CheckResult:
    for s in ser.bucket_events(ctx.labeled, "year", span=ctx.span):
        if s.m < 2:
            continue
        events = s.events
        oracle = (events[-1] - events[0]).total_seconds() / 3600 / (s.m - 1)
        if not _close(ind.ati(s), oracle):
            return CheckResult("telescoping", False, f"bucket {s.key}: {ind.ati(s)} != {oracle}")
    return CheckResult("telescoping", True)


def check_reciprocity(ctx: Context) -> CheckResult:
    for s in ser.bucket_events(ctx.labeled, "month", span=ctx.span):
        if s.m < 2:
            continue
        a, v = ind.ati(s), ind.innovation_speed(s)
        if a > 0 and not _close(a * v, 1.0):
            return CheckResult("reciprocity", False, f"bucket {s.key}: ATI*IS = {a * v}")
    return CheckResult("reciprocity", True)


def update_speed_oracle(triples: Sequence[tuple[float, float, int]]) -> float:
    """Literal double loop over consecutive members, spans in hours.

    Members tied on T_initial keep the caller's order.
    """
    ordered = sorted(triples, key=lambda t: t[0])
    numerator = 0
    denominator = 0.0
    for j in range(1, len(ordered)):
        numerator += 1
        for t0, t1, nv in (ordered[j], ordered[j - 1]):
            denominator += (t1 - t0) / 3600 / nv
    return math.inf if denominator == 0 else numerator / denominator


def check_update_speed(ctx: Context) -> CheckResult:
    for cohort in ser.update_cohorts(ctx.labeled, "year", span=ctx.span):
        if len(cohort) < 2:
            continue
        triples = [(m.t_initial, m.t_last, m.n_versions) for m in cohort.members]
        got, want = ind.update_speed(cohort), update_speed_oracle(triples)
        if not _close(got, want):
            return CheckResult("update-speed-oracle", False, f"cohort {cohort.key}: {got} != {want}")
    return CheckResult("update-speed-oracle", True)


def check_tier_partition(ctx: Context) -> CheckResult:
    high, mid, low = tier_sizes(len(ctx.labeled))
    counts = Counter(lp.impact for lp in ctx.labeled)
    got = (counts[ImpactTier.HIGH], counts[ImpactTier.MID], counts[ImpactTier.LOW])
    if ctx.span is None or got == (high, mid, low):
        return CheckResult("impact-tier-partition", True)
    return CheckResult("impact-tier-partition", False, f"sizes {got}, expected {(high, mid, low)}")


def check_labels(ctx: Context, lexicon_path: Optional[Path]) -> CheckResult:
    lexicon = load_lexicon(lexicon_path)
    for lp in ctx.labeled:
        expected = lexicon.classify(lp.enrichment.topics)
        if lp.subfields != expected:
            return CheckResult("lexicon-labels", False, f"{lp.arxiv_id}: {sorted(lp.subfields)} != {sorted(expected)}")
    return CheckResult("lexicon-labels", True)


def check_profiles(ctx: Context) -> CheckResult:
    empty = [aid for aid, p in ctx.profiles.items() if not p.assigned_subfields]
    if empty:
        return CheckResult("profile-nonempty", False, f"author {empty[0]} has no subfield")
    return CheckResult("profile-nonempty", True)


def check_determinism(records: Sequence[PreprintRecord], corpus: Path, lexicon_path: Optional[Path]) -> CheckResult:
    with tempfile.TemporaryDirectory() as tmp:
        outs = [Path(tmp) / "a", Path(tmp) / "b"]
        for out in outs:
            run_specs(all_specs(corpus, out, svg=True, lexicon=lexicon_path), records)
        names = sorted(p.name for p in outs[0].iterdir())
        if names != sorted(p.name for p in outs[1].iterdir()):
            return CheckResult("report-determinism", False, "output trees list different files")
        _, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], names, shallow=False)
        if mismatch or errors:
            return CheckResult("report-determinism", False, f"differing files: {sorted(mismatch + errors)}")
    return CheckResult("report-determinism", True)


def selfcheck(corpus: Optional[Path] = None, lexicon_path: Optional[Path] = None) -> list[CheckResult]:
    corpus = Path(corpus) if corpus else bundled_fixture()
    try:
        records = load_corpus(corpus)
    except CorpusError as exc:
        return [CheckResult(exc.invariant, False, str(exc))]
    except OSError as exc:
        return [CheckResult("corpus-readable", False, str(exc))]
    results = [check_stage_range(records)]
    manifest = check_manifest(records, corpus)
    if manifest is not None:
        results.append(manifest)
    if not results[0].ok:
        return results
    ctx = build_context(records, lexicon_path)
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_telescoping(ctx),
        lambda: check_reciprocity(ctx),
        lambda: check_update_speed(ctx),
        lambda: check_tier_partition(ctx),
        lambda: check_labels(ctx, lexicon_path),
        lambda: check_profiles(ctx),
        lambda: check_determinism(records, corpus, lexicon_path),
    ]
    results.extend(check() for check in checks)
    return results
