from .oai import AI_CATEGORIES, HarvestError, HarvestSpec, ParseError, harvest, parse_arxiv_record
from .ratelimit import TokenBucket
from .s2 import UNMATCHED, S2Client, S2Error, enrich_corpus, enrich_with_s2
from .store import CorpusLoadError, dedupe, load_corpus, save_corpus
from .transport import RecordedTransport, Response, RetryPolicy, TransportError

__all__ = [
    "AI_CATEGORIES",
    "CorpusLoadError",
    "HarvestError",
    "HarvestSpec",
    "ParseError",
    "RecordedTransport",
    "Response",
    "RetryPolicy",
    "S2Client",
    "S2Error",
    "TokenBucket",
    "TransportError",
    "UNMATCHED",
    "dedupe",
    "enrich_corpus",
    "enrich_with_s2",
    "harvest",
    "load_corpus",
    "parse_arxiv_record",
    "save_corpus",
]
