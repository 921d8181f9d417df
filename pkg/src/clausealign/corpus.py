"""Paragraph-aligned corpus ingestion and clause splitting."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

ANCIENT = "ancient"
MODERN = "modern"
LANGUAGE_TAGS = (ANCIENT, MODERN)

# comma, semicolon, period, exclamation mark; fullwidth and ASCII
DEFAULT_DELIMITERS = frozenset("，；。！,;.!")


class CorpusError(ValueError):
    """Raised for malformed corpus input."""


@dataclass(frozen=True)
class CorpusRecord:
    article_id: str
    paragraph_id: str
    ancient: str
    modern: str
    # optional whitespace-segmented copy of ``modern`` from an external tool
    modern_segmented: str | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.article_id, self.paragraph_id)


@dataclass(frozen=True)
class Clause:
    text: str
    # delimiter run that ends the clause, plus any whitespace after it
    trailing_delim: str = ""

    @property
    def char_len(self) -> int:
        return len(self.text)

    @property
    def full_text(self) -> str:
        return self.text + self.trailing_delim


@dataclass(frozen=True)
class ClauseSeq:
    clauses: tuple[Clause, ...]
    language_tag: str
    # delimiters or whitespace preceding the first clause
    prefix: str = ""

    def __len__(self) -> int:
        return len(self.clauses)

    def __getitem__(self, i):
        return self.clauses[i]

    def __iter__(self):
        return iter(self.clauses)

    @property
    def texts(self) -> list[str]:
        return [c.text for c in self.clauses]

    def reconstruct(self) -> str:
        return self.prefix + "".join(c.full_text for c in self.clauses)

    def to_json(self) -> dict:
        return {
            "prefix": self.prefix,
            "clauses": [[c.text, c.trailing_delim] for c in self.clauses],
        }

    @classmethod
    def from_json(cls, obj, language_tag: str) -> "ClauseSeq":
        clauses = tuple(Clause(text, delim) for text, delim in obj["clauses"])
        if not clauses:
            raise CorpusError("clause list is empty")
        for c in clauses:
            if not c.text:
                raise CorpusError("empty clause in clause list")
        return cls(clauses, language_tag, obj.get("prefix", ""))


def split_clauses(paragraph: str, language_tag: str = ANCIENT,
                  delimiters=DEFAULT_DELIMITERS) -> ClauseSeq:
    """Split ``paragraph`` after every delimiter.

    Segments that are empty or whitespace-only (consecutive delimiters,
    space after a comma) are folded into the preceding clause's trailing
    run, so ``split_clauses(p).reconstruct() == p`` always holds.
    """
    if language_tag not in LANGUAGE_TAGS:
        raise ValueError(f"unknown language tag {language_tag!r}")
    if not paragraph:
        raise CorpusError("empty paragraph")

    clauses: list[list[str]] = []  # [text, trailing]
    prefix = ""
    text_buf: list[str] = []
    trail_buf: list[str] = []

    def flush():
        nonlocal prefix
        text = "".join(text_buf)
        trail = "".join(trail_buf)
        if text.strip():
            clauses.append([text, trail])
        elif clauses:
            clauses[-1][1] += text + trail
        else:
            prefix += text + trail
        text_buf.clear()
        trail_buf.clear()

    for ch in paragraph:
        if ch in delimiters:
            trail_buf.append(ch)
        elif trail_buf and ch.isspace():
            trail_buf.append(ch)
        else:
            if trail_buf:
                flush()
            text_buf.append(ch)
    flush()

    if not clauses:
        raise CorpusError("no clause content")
    return ClauseSeq(tuple(Clause(t, d) for t, d in clauses), language_tag, prefix)


def _check_record(obj, lineno: int) -> CorpusRecord:
    if not isinstance(obj, dict):
        raise CorpusError(f"line {lineno}: expected a JSON object")
    missing = [k for k in ("article_id", "paragraph_id", "ancient", "modern") if k not in obj]
    if missing:
        raise CorpusError(f"line {lineno}: missing keys {', '.join(missing)}")
    for k in ("article_id", "paragraph_id", "ancient", "modern"):
        if not isinstance(obj[k], str):
            raise CorpusError(f"line {lineno}: {k} must be a string")
    seg = obj.get("modern_segmented")
    if seg is not None and not isinstance(seg, str):
        raise CorpusError(f"line {lineno}: modern_segmented must be a string")
    if not obj["article_id"] or not obj["paragraph_id"]:
        raise CorpusError(f"line {lineno}: article_id and paragraph_id must be non-empty")
    return CorpusRecord(obj["article_id"], obj["paragraph_id"], obj["ancient"], obj["modern"], seg)


def validate_record(record: CorpusRecord) -> None:
    """Raise CorpusError if either side is blank."""
    for side in LANGUAGE_TAGS:
        if not getattr(record, side).strip():
            raise CorpusError(f"record {record.article_id}/{record.paragraph_id}: {side} text is empty")


def read_jsonl(path):
    """Yield ``(lineno, obj)`` for every non-blank line of a UTF-8 JSONL file."""
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise CorpusError(f"{path}: line {lineno}: invalid UTF-8 ({e.reason})") from None
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}: line {lineno}: malformed JSON ({e.msg})") from None


def load_corpus(path, errors: list | None = None) -> list[CorpusRecord]:
    """Load a JSON Lines corpus.

    Structural problems (bad JSON, missing keys, duplicate keys) always
    raise.  Records with a blank side raise too, unless an ``errors`` list
    is given, in which case ``(key, message)`` is appended and the record
    is skipped.
    """
    records = []
    seen = set()
    for lineno, obj in read_jsonl(path):
        rec = _check_record(obj, lineno)
        if rec.key in seen:
            raise CorpusError(
                f"line {lineno}: duplicate paragraph key {rec.article_id}/{rec.paragraph_id}")
        seen.add(rec.key)
        try:
            validate_record(rec)
        except CorpusError as e:
            if errors is None:
                raise CorpusError(f"line {lineno}: {e}") from None
            errors.append((rec.key, str(e)))
            continue
        records.append(rec)
    return records


def load_parallel_text(ancient_path, modern_path, article_id: str | None = None) -> list[CorpusRecord]:
    """Load two line-aligned plain-text files.

    All paragraphs share one article id (the ancient file's stem unless
    given); paragraph ids are 1-based line numbers.
    """
    def lines(p):
        try:
            with open(p, encoding="utf-8") as fh:
                return fh.read().splitlines()
        except UnicodeDecodeError as e:
            raise CorpusError(f"{p}: invalid UTF-8 ({e.reason})") from None

    anc, mod = lines(ancient_path), lines(modern_path)
    if len(anc) != len(mod):
        raise CorpusError(f"line count mismatch: {len(anc)} ancient vs {len(mod)} modern")
    if article_id is None:
        article_id = os.path.splitext(os.path.basename(ancient_path))[0]
    records = []
    for i, (a, m) in enumerate(zip(anc, mod), 1):
        rec = CorpusRecord(article_id, str(i), a, m)
        try:
            validate_record(rec)
        except CorpusError as e:
            raise CorpusError(f"line {i}: {e}") from None
        records.append(rec)
    return records


@dataclass
class SplitRecord:
    """A corpus record with both sides split into clauses."""

    record: CorpusRecord
    ancient: ClauseSeq
    modern: ClauseSeq
    # per-modern-clause words from a pre-segmented field, if any
    modern_words: list[list[str]] | None = field(default=None)

    @property
    def key(self):
        return self.record.key

    def to_json(self) -> dict:
        out = {
            "article_id": self.record.article_id,
            "paragraph_id": self.record.paragraph_id,
            "ancient": self.ancient.to_json(),
            "modern": self.modern.to_json(),
        }
        if self.modern_words is not None:
            out["modern_words"] = self.modern_words
        return out


def split_record(record: CorpusRecord, delimiters=DEFAULT_DELIMITERS) -> SplitRecord:
    from clausealign.segmenter import presegmented_words

    anc = split_clauses(record.ancient, ANCIENT, delimiters)
    mod = split_clauses(record.modern, MODERN, delimiters)
    words = None
    if record.modern_segmented is not None:
        words = presegmented_words(mod, record.modern_segmented)
    return SplitRecord(record, anc, mod, words)


def load_split_or_raw(path, delimiters=DEFAULT_DELIMITERS, errors: list | None = None) -> list[SplitRecord]:
    """Load either a raw corpus or the output of ``split-clauses``.

    Raw records are split on the fly.  Per-record split failures go to
    ``errors`` when given, otherwise raise.
    """
    out = []
    seen = set()
    for lineno, obj in read_jsonl(path):
        if isinstance(obj, dict) and isinstance(obj.get("ancient"), dict):
            for k in ("article_id", "paragraph_id", "modern"):
                if k not in obj:
                    raise CorpusError(f"line {lineno}: missing key {k}")
            try:
                anc = ClauseSeq.from_json(obj["ancient"], ANCIENT)
                mod = ClauseSeq.from_json(obj["modern"], MODERN)
            except (KeyError, TypeError, ValueError) as e:
                raise CorpusError(f"line {lineno}: bad clause structure ({e})") from None
            rec = CorpusRecord(obj["article_id"], obj["paragraph_id"],
                               anc.reconstruct(), mod.reconstruct())
            if rec.key in seen:
                raise CorpusError(f"line {lineno}: duplicate paragraph key {rec.article_id}/{rec.paragraph_id}")
            seen.add(rec.key)
            out.append(SplitRecord(rec, anc, mod, obj.get("modern_words")))
            continue
        rec = _check_record(obj, lineno)
        if rec.key in seen:
            raise CorpusError(f"line {lineno}: duplicate paragraph key {rec.article_id}/{rec.paragraph_id}")
        seen.add(rec.key)
        try:
            validate_record(rec)
            out.append(split_record(rec, delimiters))
        except CorpusError as e:
            if errors is None:
                raise CorpusError(f"line {lineno}: {e}") from None
            errors.append((rec.key, str(e)))
    return out
