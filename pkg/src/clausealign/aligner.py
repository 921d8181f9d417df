"""Parameter estimation and dynamic-programming clause alignment."""

from __future__ import annotations

import json
import logging
import math
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from clausealign import kernels
from clausealign.corpus import ClauseSeq, CorpusError, CorpusRecord, SplitRecord, read_jsonl
from clausealign.scoring import (
    DROP_MODES,
    MODES,
    AlignmentConfig,
    AlignmentMode,
    ScoreBreakdown,
    drop_score,
    pair_score,
)

log = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-4

_BACK_MODES = {
    kernels.BP_11: AlignmentMode.M11,
    kernels.BP_21: AlignmentMode.M21,
    kernels.BP_12: AlignmentMode.M12,
    kernels.BP_22: AlignmentMode.M22,
    kernels.BP_10: AlignmentMode.M10,
    kernels.BP_01: AlignmentMode.M01,
}


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class AlignedPair:
    src_indices: tuple[int, ...]
    tgt_indices: tuple[int, ...]
    mode: AlignmentMode
    score: ScoreBreakdown | None = None
    article_id: str = ""
    paragraph_id: str = ""
    src_text: str = ""
    tgt_text: str = ""

    def __post_init__(self):
        if (len(self.src_indices), len(self.tgt_indices)) != (self.mode.src_len, self.mode.tgt_len):
            raise AlignmentError(f"indices do not match mode {self.mode.value}")
        for idx in (self.src_indices, self.tgt_indices):
            if any(b != a + 1 for a, b in zip(idx, idx[1:])):
                raise AlignmentError("indices must be adjacent and ascending")

    @property
    def is_drop(self) -> bool:
        return self.mode in DROP_MODES

    @property
    def identity(self):
        return (self.article_id, self.paragraph_id, self.src_indices, self.tgt_indices)

    def to_json(self) -> dict:
        out = {
            "article_id": self.article_id,
            "paragraph_id": self.paragraph_id,
            "src_indices": list(self.src_indices),
            "tgt_indices": list(self.tgt_indices),
            "mode": self.mode.value,
            "src_text": self.src_text,
            "tgt_text": self.tgt_text,
        }
        if self.score is not None:
            out.update(score_lexical=self.score.lexical, score_statistical=self.score.statistical,
                       score_edit=self.score.edit, score_combined=self.score.combined)
        return out

    @classmethod
    def from_json(cls, obj) -> "AlignedPair":
        src = tuple(int(i) for i in obj["src_indices"])
        tgt = tuple(int(i) for i in obj["tgt_indices"])
        mode = AlignmentMode.from_lengths(len(src), len(tgt))
        if "mode" in obj and obj["mode"] != mode.value:
            raise AlignmentError(f"mode {obj['mode']} disagrees with index counts")
        score = None
        if "score_combined" in obj:
            score = ScoreBreakdown(obj.get("score_lexical", 0.0), obj.get("score_statistical", 0.0),
                                   obj.get("score_edit", 0.0), obj["score_combined"])
        return cls(src, tgt, mode, score, str(obj["article_id"]), str(obj["paragraph_id"]),
                   obj.get("src_text", ""), obj.get("tgt_text", ""))


def read_alignments(path) -> list[AlignedPair]:
    out = []
    for lineno, obj in read_jsonl(path):
        try:
            out.append(AlignedPair.from_json(obj))
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusError(f"{path}: line {lineno}: bad alignment record ({e})") from None
    return out


def write_alignments(pairs, fh) -> None:
    for p in pairs:
        fh.write(json.dumps(p.to_json(), ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class LengthModel:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise AlignmentError("degenerate sigma: length ratios have zero spread")


def content_length(text: str, delimiters=None) -> int:
    """Characters that count toward clause length: no delimiters, no whitespace."""
    from clausealign.corpus import DEFAULT_DELIMITERS

    delims = DEFAULT_DELIMITERS if delimiters is None else delimiters
    return sum(1 for ch in text if ch not in delims and not ch.isspace())


def estimate_length_model(records, delimiters=None) -> LengthModel:
    """Mean and sample standard deviation of ancient/modern length ratios."""
    records = list(records)
    if len(records) < 2:
        raise AlignmentError("need at least 2 records to estimate the length model")
    ratios = []
    for rec in records:
        a = content_length(rec.ancient, delimiters)
        m = content_length(rec.modern, delimiters)
        if a == 0 or m == 0:
            raise AlignmentError(f"record {rec.article_id}/{rec.paragraph_id} has an empty side")
        ratios.append(a / m)
    return LengthModel(statistics.fmean(ratios), statistics.stdev(ratios))


def estimate_mode_probs(gold, floor: float = DEFAULT_FLOOR) -> dict:
    """Relative frequency of each mode; unseen modes get ``floor``."""
    gold = list(gold)
    if not gold:
        raise AlignmentError("cannot estimate mode probabilities from an empty gold set")
    counts = Counter(p.mode for p in gold)
    total = len(gold)
    return {m: (counts[m] / total if counts[m] else floor) for m in MODES}


def _span_texts(seq: ClauseSeq, idx) -> tuple[str, str]:
    """(scoring text, display text) of a clause span.

    Scoring text joins clause bodies only; display text keeps delimiters.
    """
    return ("".join(seq[i].text for i in idx), "".join(seq[i].full_text for i in idx))


def score_tables(src: ClauseSeq, tgt: ClauseSeq, config: AlignmentConfig, lexicon, idf,
                 tgt_words):
    """Score every candidate step of the lattice.

    Returns the six arrays ``dp_fill`` expects plus a dict of breakdowns
    keyed by ``(mode, i, j)`` (last source / target clause of the step).
    """
    m, n = len(src), len(tgt)
    s1 = [c.text for c in src]
    t1 = [c.text for c in tgt]
    s2 = [None] + [s1[i - 1] + s1[i] for i in range(1, m)]
    t2 = [None] + [t1[j - 1] + t1[j] for j in range(1, n)]
    w1 = tgt_words
    w2 = [None] + [w1[j - 1] + w1[j] for j in range(1, n)]

    neg = -math.inf
    arrays = {mode: np.full((m, n), neg) for mode in MODES if mode not in DROP_MODES}
    parts = {}
    for mode, s_side, t_side, w_side, i0, j0 in (
        (AlignmentMode.M11, s1, t1, w1, 0, 0),
        (AlignmentMode.M21, s2, t1, w1, 1, 0),
        (AlignmentMode.M12, s1, t2, w2, 0, 1),
        (AlignmentMode.M22, s2, t2, w2, 1, 1),
    ):
        arr = arrays[mode]
        for i in range(i0, m):
            for j in range(j0, n):
                b = pair_score(s_side[i], t_side[j], w_side[j], mode, config, lexicon, idf)
                parts[(mode, i, j)] = b
                arr[i, j] = b.combined

    b10 = drop_score(AlignmentMode.M10, config)
    b01 = drop_score(AlignmentMode.M01, config)
    d10 = np.full(m, b10.combined)
    d01 = np.full(n, b01.combined)
    for i in range(m):
        parts[(AlignmentMode.M10, i, None)] = b10
    for j in range(n):
        parts[(AlignmentMode.M01, None, j)] = b01
    tables = (arrays[AlignmentMode.M11], arrays[AlignmentMode.M21],
              arrays[AlignmentMode.M12], arrays[AlignmentMode.M22], d10, d01)
    return tables, parts


def backtrace(back) -> list[tuple[AlignmentMode, int, int]]:
    """Walk back-pointers from the corner; returns steps as (mode, i, j)
    with i, j the table cell each step ends on, in forward order."""
    i, j = back.shape[0] - 1, back.shape[1] - 1
    steps = []
    while i > 0 or j > 0:
        code = int(back[i, j])
        if code == kernels.BP_NONE:
            raise AlignmentError("unreachable cell during backtrace")
        mode = _BACK_MODES[code]
        steps.append((mode, i, j))
        i -= mode.src_len
        j -= mode.tgt_len
    steps.reverse()
    return steps


def align_paragraph(src: ClauseSeq, tgt: ClauseSeq, config: AlignmentConfig, lexicon, idf,
                    segmenter, tgt_words=None, article_id: str = "", paragraph_id: str = ""):
    """Optimal monotone alignment of two clause sequences.

    ``tgt_words`` (one word list per modern clause) overrides the
    segmenter, e.g. for pre-segmented input.
    """
    if len(src) == 0 or len(tgt) == 0:
        raise AlignmentError("both clause sequences must be non-empty")
    if tgt_words is None:
        tgt_words = [list(segmenter(c.text)) for c in tgt]
    elif len(tgt_words) != len(tgt):
        raise AlignmentError("tgt_words must have one entry per modern clause")

    tables, parts = score_tables(src, tgt, config, lexicon, idf, tgt_words)
    D, back = kernels.dp_fill(*tables)

    pairs = []
    for mode, i, j in backtrace(back):
        si = tuple(range(i - mode.src_len, i))
        tj = tuple(range(j - mode.tgt_len, j))
        key = (mode, si[-1] if si else None, tj[-1] if tj else None)
        pairs.append(AlignedPair(
            si, tj, mode, parts[key], article_id, paragraph_id,
            _span_texts(src, si)[1], _span_texts(tgt, tj)[1]))
    return pairs


def path_total(pairs) -> float:
    """Sum of combined scores in path order (matches the DP's addition order)."""
    total = 0.0
    for p in pairs:
        total = total + p.score.combined
    return total


@dataclass
class AlignResult:
    key: tuple[str, str]
    pairs: list[AlignedPair] = field(default_factory=list)
    error: str | None = None


_shared = {}


def _init_worker(config, lexicon, idf, segmenter):
    _shared.update(config=config, lexicon=lexicon, idf=idf, segmenter=segmenter)


def _align_item(item: SplitRecord, config, lexicon, idf, segmenter) -> AlignResult:
    rec = item.record
    try:
        pairs = align_paragraph(item.ancient, item.modern, config, lexicon, idf, segmenter,
                                item.modern_words, rec.article_id, rec.paragraph_id)
        return AlignResult(rec.key, pairs)
    except Exception as e:  # reported per record; the corpus run continues
        return AlignResult(rec.key, [], f"{type(e).__name__}: {e}")


def _align_pooled(item: SplitRecord) -> AlignResult:
    return _align_item(item, _shared["config"], _shared["lexicon"], _shared["idf"],
                       _shared["segmenter"])


def _as_split(items, delimiters=None):
    from clausealign.corpus import DEFAULT_DELIMITERS, split_record

    out = []
    for it in items:
        if isinstance(it, CorpusRecord):
            try:
                it = split_record(it, delimiters or DEFAULT_DELIMITERS)
            except CorpusError as e:
                it = (it.key, str(e))
        out.append(it)
    return out


def align_corpus(records, config, lexicon, idf, segmenter, jobs: int = 1,
                 progress_every: int = 1000) -> list[AlignResult]:
    """Align every paragraph; results come back in input order.

    ``records`` may hold CorpusRecord or SplitRecord items.  With
    ``jobs > 1`` paragraphs fan out over worker processes.
    """
    items = _as_split(records)
    todo = [it for it in items if isinstance(it, SplitRecord)]
    done: list[AlignResult] = []
    if jobs > 1 and len(todo) > 1:
        chunk = max(1, len(todo) // (jobs * 8))
        with ProcessPoolExecutor(jobs, initializer=_init_worker,
                                 initargs=(config, lexicon, idf, segmenter)) as ex:
            for k, r in enumerate(ex.map(_align_pooled, todo, chunksize=chunk), 1):
                done.append(r)
                if progress_every and k % progress_every == 0:
                    log.info("aligned %d/%d paragraphs", k, len(todo))
    else:
        for k, it in enumerate(todo, 1):
            done.append(_align_item(it, config, lexicon, idf, segmenter))
            if progress_every and k % progress_every == 0:
                log.info("aligned %d/%d paragraphs", k, len(todo))

    results = []
    it_done = iter(done)
    for it in items:
        if isinstance(it, SplitRecord):
            results.append(next(it_done))
        else:
            key, msg = it
            results.append(AlignResult(key, [], msg))
    return results
