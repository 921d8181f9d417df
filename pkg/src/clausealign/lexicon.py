"""Ancient-character dictionary and IDF weights for dictionary matching."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    """Headword -> definition characters, stop words already removed."""

    entries: dict[str, tuple[str, ...]] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()
    # headwords longer than one character; kept but never looked up by
    # the character-level matcher
    multi_char: frozenset[str] = frozenset()

    def definition(self, char: str) -> tuple[str, ...]:
        return self.entries.get(char, ())

    def __len__(self):
        return len(self.entries)


def remove_stopwords(text: str, stopwords) -> str:
    """Delete stop words, longest first, until none remain.

    Repeats because deleting one occurrence can join its neighbours into a
    new one.
    """
    ordered = sorted((w for w in stopwords if w), key=lambda w: (-len(w), w))
    while True:
        before = text
        for sw in ordered:
            text = text.replace(sw, "")
        if text == before:
            return text


def definition_chars(text: str, stopwords) -> tuple[str, ...]:
    cleaned = remove_stopwords(text, stopwords)
    return tuple(ch for ch in cleaned if not ch.isspace())


def load_stopwords(path) -> frozenset[str]:
    out = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tok = line.strip()
            if tok and not tok.startswith("#"):
                out.add(tok)
    return frozenset(out)


def build_lexicon(pairs, stopwords=frozenset()) -> Lexicon:
    """Build a Lexicon from ``(headword, definition text)`` pairs.

    Repeated headwords have their definitions concatenated in input order.
    """
    stopwords = frozenset(stopwords)
    merged: dict[str, list[str]] = {}
    for head, definition in pairs:
        merged.setdefault(head, []).extend(definition_chars(definition, stopwords))
    entries = {h: tuple(chars) for h, chars in merged.items()}
    multi = frozenset(h for h in entries if len(h) != 1)
    return Lexicon(entries, stopwords, multi)


def load_dictionary(dict_path, stopword_path=None) -> Lexicon:
    """Read a ``headword<TAB>definition`` TSV file."""
    stopwords = load_stopwords(stopword_path) if stopword_path else frozenset()
    pairs = []
    with open(dict_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise LexiconError(f"{dict_path}: line {lineno}: missing TAB separator")
            head, definition = line.split("\t", 1)
            head = head.strip()
            if not head:
                raise LexiconError(f"{dict_path}: line {lineno}: empty headword")
            pairs.append((head, definition))
    return build_lexicon(pairs, stopwords)


@dataclass(frozen=True)
class IdfTable:
    doc_count: int
    df: dict[str, int]
    idf: dict[str, float]

    @property
    def unseen_idf(self) -> float:
        return math.log(self.doc_count + 1)

    def get(self, word: str) -> float:
        v = self.idf.get(word)
        return self.unseen_idf if v is None else v


def build_idf(documents) -> IdfTable:
    """Smoothed IDF: ``ln((N + 1) / (df + 1))``."""
    documents = list(documents)
    if not documents:
        raise LexiconError("cannot build IDF from an empty document list")
    df = Counter()
    for doc in documents:
        df.update(set(doc))
    n = len(documents)
    idf = {w: math.log((n + 1) / (c + 1)) for w, c in df.items()}
    return IdfTable(n, dict(df), idf)
