"""Regenerate the recorded Semantic Scholar responses in tests/fixtures/s2/.

The payloads mirror the Graph API's response shape; the values are synthetic.
"""

from __future__ import annotations

import json
from pathlib import Path

from innovation_pace.ingest.s2 import AUTHOR_FIELDS, PAPER_FIELDS, S2_ENDPOINT, s2_lookup_key
from innovation_pace.ingest.transport import RecordedTransport, Response

OUT = Path(__file__).resolve().parent / "s2"

PAPERS = {
    "1906.01234": {
        "paperId": "a1b2c3",
        "title": "Pacing Convolutional Networks for Image Restoration",
        "citationCount": 4,
        "publicationDate": "2019-06-04",
        "fieldsOfStudy": ["Computer Science"],
        "s2FieldsOfStudy": [
            {"category": "Computer Science", "source": "external"},
            {"category": "Image restoration", "source": "s2-fos-model"},
        ],
        "topics": [{"topic": "Convolutional neural network", "topicId": "1"}, {"topic": "Deep learning", "topicId": "2"}],
        "authors": [
            {"authorId": "1001", "name": "Ada Lovelace"},
            {"authorId": "2002", "name": "Charles Babbage"},
            {"authorId": None, "name": "Mary Somerville"},
        ],
        "citations": [
            {"paperId": "c1", "year": 2019, "publicationDate": "2019-09-01"},
            {"paperId": "c2", "year": 2020, "publicationDate": None},
            {"paperId": "c3", "year": 2019, "publicationDate": "2018-12-31"},
            {"paperId": "c4", "year": None, "publicationDate": None},
        ],
    },
    "cs/9901001": {
        "paperId": "d4e5f6",
        "title": "An Old-Style Identifier",
        "citationCount": 0,
        "publicationDate": None,
        "fieldsOfStudy": None,
        "s2FieldsOfStudy": [],
        "authors": [{"authorId": "1002", "name": "A. M. Turing"}],
        "citations": [],
    },
}

AUTHORS = {
    "1001": {"authorId": "1001", "name": "Ada Lovelace", "influentialCitationCount": 42},
    "2002": {"authorId": "2002", "name": "Charles Babbage", "influentialCitationCount": 7},
    "1002": {"authorId": "1002", "name": "Alan Turing", "influentialCitationCount": 1000},
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.json"):
        old.unlink()
    for arxiv_id, payload in PAPERS.items():
        RecordedTransport.record(OUT, "GET", f"{S2_ENDPOINT}/paper/{s2_lookup_key(arxiv_id)}",
                                 {"fields": PAPER_FIELDS}, Response(200, json.dumps(payload, sort_keys=True), {}))
    RecordedTransport.record(OUT, "GET", f"{S2_ENDPOINT}/paper/{s2_lookup_key('0000.00000')}",
                             {"fields": PAPER_FIELDS}, Response(404, '{"error":"Paper not found"}', {}))
    for author_id, payload in AUTHORS.items():
        RecordedTransport.record(OUT, "GET", f"{S2_ENDPOINT}/author/{author_id}",
                                 {"fields": AUTHOR_FIELDS}, Response(200, json.dumps(payload, sort_keys=True), {}))
    print(f"wrote {len(list(OUT.glob('*.json')))} recordings to {OUT}")


if __name__ == "__main__":
    main()
