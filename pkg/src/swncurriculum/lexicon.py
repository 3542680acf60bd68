"""SentiWordNet 3.0 reader.

The distribution file is tab separated::

    # POS  ID  PosScore  NegScore  SynsetTerms  Gloss
    a  00001740  0.125  0  able#1  (usually followed by `to') ...

Each data line scores one synset. A word that belongs to several synsets
(any part of speech, any sense number) gets the plain average of their
positivity and negativity; objectivity is derived as ``1 - pos - neg``.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, TextIO, Union

POS_TAGS = frozenset("anvr")


class LexiconParseError(ValueError):
    """Malformed SentiWordNet input. ``lineno`` is 1-based (0 for whole-file errors)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"{message} at line {lineno}"
        super().__init__(message)


@dataclass(frozen=True)
class SynsetRecord:
    pos_tag: str
    synset_id: str
    positivity: float
    negativity: float
    terms: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class WordScore:
    positivity: float
    negativity: float

    @property
    def objectivity(self) -> float:
        # averaging can leave pos + neg a rounding error above 1
        return max(0.0, 1.0 - self.positivity - self.negativity)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.positivity, self.negativity, self.objectivity)


@dataclass(frozen=True)
class SentimentLexicon:
    entries: Mapping[str, WordScore] = field(repr=False)
    record_count: int

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self.entries

    def get(self, lemma: str) -> Optional[WordScore]:
        return lookup(self, lemma)


def _parse_score(text: str, name: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise LexiconParseError(f"unparsable {name} {text!r}", lineno) from None
    if not 0.0 <= value <= 1.0:
        raise LexiconParseError(f"{name} {value} outside [0, 1]", lineno)
    return value


def _parse_term(term: str, lineno: int) -> tuple[str, int]:
    lemma, sep, sense = term.rpartition("#")
    if not sep or not lemma:
        raise LexiconParseError(f"bad synset term {term!r}", lineno)
    try:
        return lemma.lower(), int(sense)
    except ValueError:
        raise LexiconParseError(f"bad sense number in {term!r}", lineno) from None


def parse_record(line: str, lineno: int = 0) -> SynsetRecord:
    """Parse one data line. Columns past the fifth are gloss text and ignored."""
    cols = line.rstrip("\r\n").split("\t")
    if len(cols) < 5:
        raise LexiconParseError(f"expected at least 5 columns, got {len(cols)}", lineno)
    pos_tag, synset_id, pos_s, neg_s, terms_s = (c.strip() for c in cols[:5])
    if pos_tag not in POS_TAGS:
        raise LexiconParseError(f"unknown part of speech {pos_tag!r}", lineno)
    if not synset_id.isdigit():
        raise LexiconParseError(f"bad synset id {synset_id!r}", lineno)
    positivity = _parse_score(pos_s, "PosScore", lineno)
    negativity = _parse_score(neg_s, "NegScore", lineno)
    # both are multiples of 1/8 in the real file, so a tiny slack is plenty
    if positivity + negativity > 1.0 + 1e-12:
        raise LexiconParseError("scores sum exceeds 1", lineno)
    terms = tuple(_parse_term(t, lineno) for t in terms_s.split())
    if not terms:
        raise LexiconParseError("no synset terms", lineno)
    return SynsetRecord(pos_tag, synset_id, positivity, negativity, terms)


def iter_records(stream: Iterable[str]) -> Iterator[SynsetRecord]:
    for lineno, line in enumerate(stream, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield parse_record(line, lineno)


def build_lexicon(records: Iterable[SynsetRecord]) -> SentimentLexicon:
    sums: dict[str, list[float]] = {}
    count = 0
    for rec in records:
        count += 1
        # a lemma listed twice in one synset (different senses) counts once per listing
        for lemma, _sense in rec.terms:
            acc = sums.setdefault(lemma, [0.0, 0.0, 0])
            acc[0] += rec.positivity
            acc[1] += rec.negativity
            acc[2] += 1
    entries = {w: WordScore(p / k, n / k) for w, (p, n, k) in sums.items()}
    return SentimentLexicon(entries=entries, record_count=count)


def parse_swn_file(stream: Union[TextIO, Iterable[str], str, os.PathLike]) -> SentimentLexicon:
    """Read a SentiWordNet 3.0 file (path or open text stream) into a lexicon.

    Raises LexiconParseError with the offending line number on malformed
    rows, and on input that holds no data lines at all.
    """
    if isinstance(stream, (str, os.PathLike)):
        with io.open(stream, encoding="utf-8") as fh:
            return parse_swn_file(fh)
    lex = build_lexicon(iter_records(stream))
    if lex.record_count == 0:
        raise LexiconParseError("empty SentiWordNet input")
    return lex


def lookup(lexicon: SentimentLexicon, lemma: str) -> Optional[WordScore]:
    """Averaged score for ``lemma`` (case-folded), or None when absent."""
    return lexicon.entries.get(lemma.lower())
