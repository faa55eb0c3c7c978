"""Deduplication and line-delimited JSON persistence of corpora."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

from ..corpus import CorpusError, PreprintRecord, record_from_json, record_to_json


class CorpusLoadError(CorpusError):
    def __init__(self, path: Path | str, line: int, message: str, invariant: str = "record-structure") -> None:
        super().__init__(f"{path}:{line}: {message}", invariant)
        self.path = str(path)
        self.line = line


def corpus_order(p: PreprintRecord) -> tuple:
    return (p.submitted, p.arxiv_id)


def dedupe(records: Iterable[PreprintRecord]) -> list[PreprintRecord]:
    """Keep one record per arXiv id.

    The record with more versions wins, then the one with the later last
    version; a full tie keeps the first occurrence. Output is sorted by
    (initial submission, arxiv_id).
    """
    best: dict[str, PreprintRecord] = {}
    for p in records:
        cur = best.get(p.arxiv_id)
        if cur is None or (p.n_versions, p.last_updated) > (cur.n_versions, cur.last_updated):
            best[p.arxiv_id] = p
    return sorted(best.values(), key=corpus_order)


def dumps_record(p: PreprintRecord) -> str:
    return json.dumps(record_to_json(p), ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def save_corpus(records: Iterable[PreprintRecord], path: Path | str) -> Path:
    """Write records sorted by (initial submission, id), one JSON object per line.

    Output is byte-deterministic for a given corpus; the file is replaced
    atomically so readers never observe a half-written corpus.
    """
    path = Path(path)
    ordered = sorted(records, key=corpus_order)
    ids = [p.arxiv_id for p in ordered]
    if len(ids) != len(set(ids)):
        raise CorpusError("corpus contains duplicate arxiv_ids; dedupe first", "unique-arxiv-id")
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for p in ordered:
                fh.write(dumps_record(p))
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_corpus(path: Path | str) -> list[PreprintRecord]:
    path = Path(path)
    records: list[PreprintRecord] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusLoadError(path, lineno, f"malformed JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusLoadError(path, lineno, "line is not a JSON object")
            try:
                p = record_from_json(obj)
            except CorpusError as exc:
                raise CorpusLoadError(path, lineno, str(exc), exc.invariant) from exc
            if p.arxiv_id in seen:
                raise CorpusLoadError(path, lineno, f"duplicate arxiv_id {p.arxiv_id}", "unique-arxiv-id")
            seen.add(p.arxiv_id)
            records.append(p)
    return records
