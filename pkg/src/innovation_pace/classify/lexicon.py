"""Clue-word lexicon and whole-phrase topic classification."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from ..corpus import Subfield

_QUOTES = str.maketrans({"\u2018": "'", "\u2019": "'", "\u201c": '"', "\u201d": '"',
                         "\u2010": "-", "\u2011": "-", "\u2012": "-", "\u2013": "-", "\u2014": "-"})
_PLURAL = re.compile(r"\((s|es)\)")
_TRAILING_ALIAS = re.compile(r"^(?P<head>.*\S)\s+\((?P<alias>[^()\s]+(?:\((?:s|es)\))?)\)$")


class LexiconError(ValueError):
    pass


def normalize(text: str) -> str:
    """Case-fold and canonicalise a phrase or topic string.

    NFKC, curly quotes and unicode dashes to ASCII, lowercase, whitespace
    collapsed, outer quotes stripped. Idempotent.
    """
    out = unicodedata.normalize("NFKC", text).translate(_QUOTES).lower()
    out = " ".join(out.split())
    return out.strip("\"' ").strip()


def _is_acronym(token: str) -> bool:
    core = _PLURAL.sub("", token)
    return sum(ch.isupper() for ch in core) >= 2


def _expand_slashes(phrase: str) -> list[str]:
    segments = [s.strip() for s in phrase.split("/")]
    if len(segments) == 1:
        return segments
    words = [s.split() for s in segments]
    single = [len(w) == 1 for w in words]
    out: list[str] = []
    for i, seg in enumerate(segments):
        if not single[i]:
            nxt = i + 1
            if nxt < len(segments) and not single[nxt]:
                # "Reasoning with/about beliefs": the slash binds the two
                # words either side of it.
                left, right = words[i], words[nxt]
                out.append(" ".join(left + right[1:]))
                out.append(" ".join(left[:-1] + right))
            elif not (i > 0 and not single[i - 1]):
                out.append(seg)
            continue
        if _is_acronym(seg):
            out.append(seg)
            continue
        # run of plain single words: substitute into the next multi-word
        # segment ("Agent/AI theories ...") or the previous one
        # ("Feature Construction/Reformulation").
        j = i
        while j < len(segments) and single[j] and not _is_acronym(segments[j]):
            j += 1
        if j < len(segments) and not single[j]:
            out.append(" ".join([seg] + words[j][1:]))
            continue
        k = i
        while k >= 0 and single[k] and not _is_acronym(segments[k]):
            k -= 1
        if k >= 0 and not single[k]:
            out.append(" ".join(words[k][:-1] + [seg]))
            continue
        out.append(seg)
    return out


def expand_variants(phrase: str) -> list[str]:
    """Spell out the alternatives packed into one printed phrase.

    >>> expand_variants("Support vector machine(s)/SVM(s)")
    ['Support vector machine', 'Support vector machines', 'SVM', 'SVMs']
    """
    phrase = " ".join(phrase.split())
    pieces = [phrase]
    m = _TRAILING_ALIAS.match(phrase)
    if m and _is_acronym(m.group("alias")):
        pieces = [m.group("head"), m.group("alias")]
    variants: list[str] = []
    for piece in pieces:
        for alt in _expand_slashes(piece):
            if _PLURAL.search(alt):
                variants.append(_PLURAL.sub("", alt))
                variants.append(_PLURAL.sub(r"\1", alt))
            else:
                variants.append(alt)
    seen: dict[str, None] = {}
    for v in variants:
        seen.setdefault(v, None)
    return list(seen)


@dataclass(frozen=True)
class ClueLexicon:
    entries: Mapping[str, frozenset[Subfield]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, topic: str) -> frozenset[Subfield]:
        return self.entries.get(normalize(topic), frozenset())

    def classify(self, topics: Iterable[str]) -> frozenset[Subfield]:
        return classify_preprint(topics, self)


def build_lexicon(raw: Mapping[Subfield | str, Iterable[str]]) -> ClueLexicon:
    """Build a lexicon from printed phrases grouped by subfield.

    Every one of the nine subfields must be present with at least one
    phrase. A phrase listed under several subfields maps to all of them.
    """
    grouped = {Subfield(k): list(v) for k, v in raw.items()}
    for s in Subfield:
        if not grouped.get(s):
            raise LexiconError(f"subfield {s.value} has no clue phrases")
    entries: dict[str, set[Subfield]] = {}
    for s in Subfield:
        for phrase in grouped[s]:
            # the printed form itself also matches, markers and all
            for variant in [phrase, *expand_variants(phrase)]:
                key = normalize(variant)
                if key:
                    entries.setdefault(key, set()).add(s)
    return ClueLexicon({k: frozenset(v) for k, v in sorted(entries.items())})


def read_lexicon_tsv(text: str) -> dict[Subfield, list[str]]:
    grouped: dict[Subfield, list[str]] = {s: [] for s in Subfield}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            phrase, codes = line.split("\t")
        except ValueError:
            raise LexiconError(f"line {lineno}: expected 'phrase<TAB>codes'") from None
        for code in codes.split(","):
            try:
                grouped[Subfield(code.strip().upper())].append(phrase.strip())
            except ValueError:
                raise LexiconError(f"line {lineno}: unknown subfield code {code.strip()!r}") from None
    return grouped


def load_lexicon(path: Path | str | None = None) -> ClueLexicon:
    """Load a lexicon file; ``None`` loads the bundled clue-word lexicon."""
    if path is None:
        text = resources.files("innovation_pace.data").joinpath("clue_words.tsv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return build_lexicon(read_lexicon_tsv(text))


def classify_preprint(topics: Iterable[str], lex: ClueLexicon) -> frozenset[Subfield]:
    """Union of subfields whose clue phrase equals one of ``topics`` after normalisation."""
    labels: set[Subfield] = set()
    for topic in topics:
        labels |= lex.lookup(topic)
    return frozenset(labels)
