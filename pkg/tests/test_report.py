from __future__ import annotations

import csv
import filecmp
import json
import shutil
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from innovation_pace.corpus import ImpactTier, Subfield
from innovation_pace.ingest import save_corpus
from innovation_pace.report import ReportSpec, UsageError, all_specs, run, run_specs, selfcheck
from innovation_pace.report.cli import main

from conftest import FIXTURES, make_record, utc


def read_csv(path: Path) -> tuple[str, list[dict[str, str]]]:
    lines = path.read_text(encoding="utf-8").split("\n")
    return lines[0], list(csv.DictReader(lines[1:]))


def test_is_all_year_matches_golden(fixture_corpus_path, tmp_path):
    (path,) = run(ReportSpec(fixture_corpus_path, tmp_path, "is"))
    assert path.read_bytes() == (FIXTURES / "golden" / "is_all_year.csv").read_bytes()


def test_schema_line_and_lf_endings(fixture_corpus_path, tmp_path):
    (path,) = run(ReportSpec(fixture_corpus_path, tmp_path, "ati", "subfield"))
    raw = path.read_bytes()
    assert b"\r" not in raw
    schema, rows = read_csv(path)
    assert schema == "#schema=innovation_pace/ati/v1"
    years = [int(r["year"]) for r in rows]
    assert years == sorted(years)


def test_us_without_updates_gives_empty_cells(tmp_path):
    corpus = tmp_path / "flat.jsonl"
    save_corpus([make_record(f"p{i}", [utc(2019, 1, 1 + i)]) for i in range(5)], corpus)
    assert main(["report", "--corpus", str(corpus), "--out", str(tmp_path / "out"), "--metric", "us"]) == 0
    _, rows = read_csv(tmp_path / "out" / "us_all_year.csv")
    assert rows and all(v == "" for r in rows for k, v in r.items() if k.endswith("per_hour"))


def test_daily_counts_match_manifest(fixture_corpus_path, tmp_path):
    (path,) = run(ReportSpec(fixture_corpus_path, tmp_path, "count", granularity="day"))
    _, rows = read_csv(path)
    got = {r["day"]: int(r["all_n"]) for r in rows if r["all_n"] != "0"}
    manifest = json.loads(fixture_corpus_path.with_name("corpus.manifest.json").read_text())
    assert got == manifest["analytic_daily_counts"]


@pytest.mark.parametrize("metric,group", [("us", "impact"), ("productivity", "subfield"), ("days_coverage", "official")])
def test_invalid_combination_lists_valid_pairs(metric, group, fixture_corpus_path, tmp_path, capsys):
    with pytest.raises(UsageError):
        ReportSpec(fixture_corpus_path, tmp_path, metric, group).validate()
    code = main(["report", "--corpus", str(fixture_corpus_path), "--out", str(tmp_path),
                 "--metric", metric, "--group", group])
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("error: kind=usage message=")
    assert "valid metric/grouping combinations" in json.loads(err.split("message=", 1)[1])


def test_yearly_only_metric_rejects_month(fixture_corpus_path, tmp_path):
    code = main(["report", "--corpus", str(fixture_corpus_path), "--out", str(tmp_path),
                 "--metric", "cited_ratio", "--granularity", "month"])
    assert code == 2


def test_missing_corpus_is_an_error(tmp_path, capsys):
    code = main(["report", "--corpus", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path), "--metric", "is"])
    assert code == 1
    assert "kind=corpus-missing" in capsys.readouterr().err


def test_truncated_corpus_is_a_load_error(fixture_corpus_path, tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(fixture_corpus_path.read_text()[:-40], encoding="utf-8")
    code = main(["report", "--corpus", str(bad), "--out", str(tmp_path), "--metric", "is"])
    assert code == 1
    assert "kind=corpus" in capsys.readouterr().err


def test_all_reports_are_deterministic(fixture_corpus_path, tmp_path):
    a = run_specs(all_specs(fixture_corpus_path, tmp_path / "a", svg=True))
    b = run_specs(all_specs(fixture_corpus_path, tmp_path / "b", svg=True))
    assert [p.name for p in a] == [p.name for p in b]
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", [p.name for p in a], shallow=False)
    assert not mismatch and not errors


def test_svg_is_well_formed(fixture_corpus_path, tmp_path):
    paths = run(ReportSpec(fixture_corpus_path, tmp_path, "is", "subfield", svg=True))
    (svg,) = [p for p in paths if p.suffix == ".svg"]
    root = ET.parse(svg).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert root.get("version") == "1.1"


def test_tier_restriction(fixture_corpus_path, tmp_path):
    (path,) = run(ReportSpec(fixture_corpus_path, tmp_path, "count", tier=ImpactTier.HIGH))
    _, rows = read_csv(path)
    # 47 matched preprints, ceil(0.2 * 47) = 10 of them High
    assert sum(int(r["all_n"]) for r in rows) == 10
    assert path.name == "count_all_year_high.csv"


# -- selfcheck -------------------------------------------------------------------------


def test_selfcheck_pristine(capsys):
    assert main(["selfcheck"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines and all("status=pass" in line for line in lines)


def _copy_fixture(src: Path, dst: Path) -> Path:
    corpus = dst / "corpus.jsonl"
    shutil.copy(src, corpus)
    shutil.copy(src.with_name("corpus.manifest.json"), dst / "corpus.manifest.json")
    return corpus


def _mutate(corpus: Path, fn) -> None:
    lines = corpus.read_text(encoding="utf-8").splitlines()
    obj = json.loads(lines[5])
    fn(obj)
    lines[5] = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_selfcheck_flags_shifted_submission(fixture_corpus_path, tmp_path, capsys):
    corpus = _copy_fixture(fixture_corpus_path, tmp_path)

    def shift(obj):
        ts = obj["versions"][0]["ts"]
        obj["versions"][0]["ts"] = ts[:8] + ("02" if ts[8:10] != "02" else "03") + ts[10:]
        obj["versions"] = obj["versions"][:1]

    _mutate(corpus, shift)
    assert main(["selfcheck", "--corpus", str(corpus)]) != 0
    out = capsys.readouterr().out
    assert "invariant=manifest-daily-counts status=FAIL" in out


def test_selfcheck_flags_non_monotone_versions(fixture_corpus_path, tmp_path, capsys):
    corpus = _copy_fixture(fixture_corpus_path, tmp_path)

    def swap(obj):
        obj["versions"] = [{"n": 1, "ts": "2019-06-02T00:00:00Z"}, {"n": 2, "ts": "2019-06-01T00:00:00Z"}]

    _mutate(corpus, swap)
    results = selfcheck(corpus)
    assert [(r.invariant, r.ok) for r in results] == [("version-timestamps-monotone", False)]
    assert main(["selfcheck", "--corpus", str(corpus)]) != 0
    assert "invariant=version-timestamps-monotone status=FAIL" in capsys.readouterr().out


# -- other subcommands -----------------------------------------------------------------


def test_classify_with_custom_lexicon(fixture_corpus_path, tmp_path):
    lex = tmp_path / "custom.tsv"
    lex.write_text("\n".join(f"only {s.value}\t{s.value}" for s in Subfield) + "\nclustering\tRO\n",
                   encoding="utf-8")
    assert main(["classify", "--corpus", str(fixture_corpus_path), "--out", str(tmp_path / "c"),
                 "--lexicon", str(lex)]) == 0
    labels = [json.loads(line) for line in (tmp_path / "c" / "labels.jsonl").read_text().splitlines()]
    assert {tuple(x["subfields"]) for x in labels} <= {(), ("RO",)}
    assert ("RO",) in {tuple(x["subfields"]) for x in labels}


def test_classify_default_lexicon(fixture_corpus_path, tmp_path, capsys):
    assert main(["classify", "--corpus", str(fixture_corpus_path), "--out", str(tmp_path)]) == 0
    assert "labeled=47 profiles=4" in capsys.readouterr().out
    with (tmp_path / "author_profiles.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["author_id"] for r in rows} == {"1001", "1002", "1003", "1004"}
    assert all(r["subfields"] for r in rows)


def test_harvest_replay(tmp_path):
    from innovation_pace.ingest import RecordedTransport, load_corpus
    from innovation_pace.ingest.oai import OAI_ENDPOINT
    from innovation_pace.ingest.transport import Response

    replay = tmp_path / "oai"
    pages = {None: "page1.xml", "6201841|1001": "page2.xml"}
    for token, name in pages.items():
        params = ({"verb": "ListRecords", "resumptionToken": token} if token
                  else {"verb": "ListRecords", "metadataPrefix": "arXivRaw", "set": "cs"})
        text = (FIXTURES / "oai" / name).read_text(encoding="utf-8")
        RecordedTransport.record(replay, "GET", OAI_ENDPOINT, params, Response(200, text))
    corpus = tmp_path / "corpus.jsonl"
    code = main(["harvest", "--corpus", str(corpus), "--from", "1993-01-01", "--until", "2019-12-31",
                 "--rate", "0.001", "--replay", str(replay)])
    assert code == 0
    assert {p.arxiv_id for p in load_corpus(corpus)} == {"cs/9901001", "1906.01234", "1907.00001"}


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    assert "kind=usage" in capsys.readouterr().err
