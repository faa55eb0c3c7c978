"""``innovation-pace`` command line: harvest | enrich | classify | report | selfcheck.

Failures print a single ``error: kind=<kind> message=<json string>`` line on
stderr. Usage errors exit 2, everything else 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import date
from pathlib import Path
from typing import Optional, Sequence

from ..classify import LexiconError, build_author_profiles, label_corpus, load_lexicon
from ..classify.tiers import assign_author_influence_tiers
from ..corpus import CorpusError, ImpactTier, build_author_records
from ..ingest import (
    AI_CATEGORIES,
    HarvestError,
    HarvestSpec,
    ParseError,
    RecordedTransport,
    S2Client,
    dedupe,
    enrich_corpus,
    harvest,
    load_corpus,
    save_corpus,
)
from ..ingest.transport import TransportError, urllib_transport
from .runner import run_specs
from .selfcheck import selfcheck
from .spec import GRANULARITIES, GROUPINGS, METRICS, ReportSpec, UsageError, all_specs

log = logging.getLogger("innovation_pace")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}")


def _tier(text: str) -> ImpactTier:
    for t in ImpactTier:
        if t.value.lower() == text.lower():
            return t
    raise argparse.ArgumentTypeError(f"unknown tier {text!r}; expected high, mid or low")


def _transport(replay: Optional[Path]):
    return RecordedTransport(replay, strict=False) if replay else urllib_transport


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="innovation-pace", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("harvest", help="harvest arXiv metadata over OAI-PMH into a corpus file")
    h.add_argument("--corpus", type=Path, required=True, help="corpus file; merged into if it exists")
    h.add_argument("--from", dest="from_date", type=_date, required=True)
    h.add_argument("--until", dest="until_date", type=_date, required=True)
    h.add_argument("--categories", default=",".join(sorted(AI_CATEGORIES)),
                   help="comma-separated arXiv categories")
    h.add_argument("--rate", type=float, default=3.0, help="minimum seconds between requests")
    h.add_argument("--resume", help="resumption token printed by an interrupted run")
    h.add_argument("--replay", type=Path, help="serve requests from recorded responses in DIR")

    e = sub.add_parser("enrich", help="attach citation metadata and author influence")
    e.add_argument("--corpus", type=Path, required=True)
    e.add_argument("--refresh", action="store_true", help="re-query already matched records")
    e.add_argument("--no-author-influence", action="store_true")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--replay", type=Path)

    c = sub.add_parser("classify", help="label preprints and profile authors")
    c.add_argument("--corpus", type=Path, required=True)
    c.add_argument("--out", type=Path, required=True)
    c.add_argument("--lexicon", type=Path)

    r = sub.add_parser("report", help="emit CSV (and SVG) series")
    r.add_argument("--corpus", type=Path, required=True)
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--metric", required=True, choices=METRICS + ("all",))
    r.add_argument("--group", default="all", choices=GROUPINGS)
    r.add_argument("--granularity", default="year", choices=GRANULARITIES)
    r.add_argument("--from", dest="from_date", type=_date)
    r.add_argument("--until", dest="until_date", type=_date)
    r.add_argument("--lexicon", type=Path)
    r.add_argument("--usv-divisor", default="nv", choices=("nv", "nv-minus-1"))
    r.add_argument("--tier", type=_tier, help="restrict preprint series to one impact tier")
    r.add_argument("--svg", action="store_true")

    s = sub.add_parser("selfcheck", help="run the invariant suite")
    s.add_argument("--corpus", type=Path, help="defaults to the bundled fixture")
    s.add_argument("--lexicon", type=Path)
    return parser


def cmd_harvest(args) -> int:
    spec = HarvestSpec(
        categories=frozenset(c.strip() for c in args.categories.split(",") if c.strip()),
        from_date=args.from_date,
        until_date=args.until_date,
        rate_limit=args.rate,
    )
    existing = load_corpus(args.corpus) if args.corpus.exists() else []
    fetched = []
    try:
        for p in harvest(spec, _transport(args.replay), resume_token=args.resume):
            fetched.append(p)
    finally:
        # persist partial progress so a resumed run only adds new pages
        save_corpus(dedupe(existing + fetched), args.corpus)
    print(f"harvest: records={len(fetched)} corpus={args.corpus}")
    return 0


def cmd_enrich(args) -> int:
    records = load_corpus(args.corpus)
    client = S2Client(_transport(args.replay))
    enriched = enrich_corpus(records, client, refresh=args.refresh,
                             author_influence=not args.no_author_influence, workers=args.workers)
    save_corpus(enriched, args.corpus)
    counts: dict[str, int] = {}
    for p in enriched:
        counts[p.s2_status.value] = counts.get(p.s2_status.value, 0) + 1
    print("enrich: " + " ".join(f"{k}={counts[k]}" for k in sorted(counts)))
    return 0


def cmd_classify(args) -> int:
    records = load_corpus(args.corpus)
    labeled = label_corpus(records, load_lexicon(args.lexicon))
    authors = build_author_records(lp.record for lp in labeled)
    influence = assign_author_influence_tiers(authors)
    profiles = build_author_profiles(labeled, authors, influence)
    args.out.mkdir(parents=True, exist_ok=True)
    with (args.out / "labels.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for lp in sorted(labeled, key=lambda x: (x.submitted, x.arxiv_id)):
            row = {
                "arxiv_id": lp.arxiv_id,
                "subfields": [s.value for s in sorted(lp.subfields, key=lambda s: s.order)],
                "impact": lp.impact.value,
                "official": lp.official,
                "stage": lp.stage.label,
            }
            fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")
    with (args.out / "author_profiles.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["author_id", "name", "preprints", "subfields", "breadth", "influence", "first_submission"])
        for p in profiles:
            writer.writerow([
                p.author_id, p.author.name, p.preprint_count,
                ";".join(s.value for s in sorted(p.assigned_subfields, key=lambda s: s.order)),
                p.breadth, p.influence_tier.value, p.first_submission.date().isoformat(),
            ])
    print(f"classify: labeled={len(labeled)} profiles={len(profiles)} out={args.out}")
    return 0


def cmd_report(args) -> int:
    common = dict(
        granularity=args.granularity, svg=args.svg, from_date=args.from_date, until_date=args.until_date,
        tier=args.tier, us_divisor=args.usv_divisor, lexicon=args.lexicon,
    )
    if args.metric == "all":
        if args.group != "all":
            raise UsageError("--metric all runs every valid grouping; drop --group")
        common.pop("granularity")
        if args.granularity != "year":
            raise UsageError("--metric all is year-granular only")
        if args.tier is not None:
            raise UsageError("--tier cannot be combined with --metric all")
        common.pop("tier")
        specs = all_specs(args.corpus, args.out, **common)
    else:
        specs = [ReportSpec(args.corpus, args.out, args.metric, args.group, **common)]
    for path in run_specs(specs):
        print(path)
    return 0


def cmd_selfcheck(args) -> int:
    results = selfcheck(args.corpus, args.lexicon)
    for r in results:
        print(r.line())
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {
    "harvest": cmd_harvest,
    "enrich": cmd_enrich,
    "classify": cmd_classify,
    "report": cmd_report,
    "selfcheck": cmd_selfcheck,
}


def _fail(kind: str, message: str, code: int) -> int:
    print(f"error: kind={kind} message={json.dumps(message)}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if not args.corpus or args.command in ("harvest",) or args.corpus.exists():
            return COMMANDS[args.command](args)
        return _fail("corpus-missing", f"{args.corpus} does not exist", 1)
    except UsageError as exc:
        return _fail("usage", str(exc), 2)
    except CorpusError as exc:
        return _fail("corpus", f"{exc} [invariant={exc.invariant}]", 1)
    except LexiconError as exc:
        return _fail("lexicon", str(exc), 1)
    except HarvestError as exc:
        return _fail("harvest", str(exc), 1)
    except ParseError as exc:
        return _fail("parse", str(exc), 1)
    except TransportError as exc:
        return _fail("transport", str(exc), 1)
    except OSError as exc:
        return _fail("io", str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
