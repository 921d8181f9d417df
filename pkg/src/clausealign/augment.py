"""Sentence-level augmentation by merging adjacent aligned clause pairs,
and article-disjoint train/dev/test splitting."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

DEFAULT_MAX_SPAN = 4
DEFAULT_MAX_LEN = 50
DEFAULT_RATIOS = (0.8, 0.1, 0.1)
SPLIT_NAMES = ("train", "dev", "test")


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class SpanPair:
    src_text: str
    tgt_text: str
    clause_pair_count: int
    article_id: str = ""
    paragraph_id: str = ""
    start: int = 0  # index of the first aligned pair in the paragraph
    end: int = 1    # one past the last

    def to_json(self) -> dict:
        return {
            "src": self.src_text,
            "tgt": self.tgt_text,
            "article_id": self.article_id,
            "paragraph_id": self.paragraph_id,
            "span": [self.start, self.end],
            "clause_pair_count": self.clause_pair_count,
        }

    @classmethod
    def from_json(cls, obj) -> "SpanPair":
        start, end = obj["span"]
        return cls(obj["src"], obj["tgt"], int(obj["clause_pair_count"]),
                   str(obj["article_id"]), str(obj["paragraph_id"]), int(start), int(end))


def _runs(pairs):
    """Maximal stretches of consecutive non-drop pairs, as (start, end)."""
    start = None
    for k, p in enumerate(pairs):
        if p.is_drop:
            if start is not None:
                yield start, k
            start = None
        elif start is None:
            start = k
    if start is not None:
        yield start, len(pairs)


def augment_paragraph(pairs, max_span: int = DEFAULT_MAX_SPAN, max_len: int = DEFAULT_MAX_LEN,
                      filter_both_sides: bool = False) -> list[SpanPair]:
    """Every contiguous run of 1..max_span aligned pairs, minus long ones.

    Drop pairs are never emitted and no span crosses one.  Spans whose
    source text (delimiters included) exceeds ``max_len`` characters are
    removed; with ``filter_both_sides`` the target is checked as well.
    Output is ordered by span width, then start position.
    """
    pairs = list(pairs)
    out = []
    runs = list(_runs(pairs))
    for width in range(1, max_span + 1):
        for a, b in runs:
            for start in range(a, b - width + 1):
                chunk = pairs[start:start + width]
                src = "".join(p.src_text for p in chunk)
                tgt = "".join(p.tgt_text for p in chunk)
                if len(src) > max_len or (filter_both_sides and len(tgt) > max_len):
                    continue
                out.append(SpanPair(src, tgt, width, chunk[0].article_id, chunk[0].paragraph_id,
                                    start, start + width))
    return out


def expected_span_count(k: int, max_span: int = DEFAULT_MAX_SPAN) -> int:
    return sum(k - w + 1 for w in range(1, min(max_span, k) + 1))


@dataclass
class DatasetSplit:
    train: list = field(default_factory=list)
    dev: list = field(default_factory=list)
    test: list = field(default_factory=list)
    split_seed: int = 0
    articles: dict = field(default_factory=dict)  # split name -> article ids

    def parts(self):
        return {"train": self.train, "dev": self.dev, "test": self.test}


def split_dataset(groups, ratios=DEFAULT_RATIOS, seed: int = 0) -> DatasetSplit:
    """Assign whole articles to train/dev/test.

    ``groups`` maps article_id -> list of items (paragraphs or spans).
    Articles are shuffled with ``seed``, stably reordered largest first,
    and each goes to the split whose item count falls furthest below its
    target share; ties go to the earlier split.  Once the articles left equal the number of still
    empty splits, those splits are filled first so none ends up empty.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise SplitError("ratios must be three positive numbers")
    if not math.isclose(sum(ratios), 1.0, abs_tol=1e-9):
        raise SplitError("ratios must sum to 1")
    if len(groups) < 3:
        raise SplitError(f"need at least 3 articles to split, got {len(groups)}")

    order = sorted(groups)
    random.Random(seed).shuffle(order)
    # largest first keeps a dominant article from landing in a small split
    order.sort(key=lambda a: -len(groups[a]))
    total = sum(len(groups[a]) for a in order)
    counts = [0, 0, 0]
    assigned = [[], [], []]
    for pos, art in enumerate(order):
        left = len(order) - pos
        empty = [k for k in range(3) if not assigned[k]]
        if empty and left <= len(empty):
            k = empty[0]
        else:
            deficits = [ratios[k] * total - counts[k] for k in range(3)]
            k = max(range(3), key=lambda x: (deficits[x], -x))
        assigned[k].append(art)
        counts[k] += len(groups[art])

    result = DatasetSplit(split_seed=seed)
    for name, arts in zip(SPLIT_NAMES, assigned):
        result.articles[name] = list(arts)
        bucket = getattr(result, name)
        for art in arts:
            bucket.extend(groups[art])
    return result


def write_spans(spans, fh) -> None:
    for s in spans:
        fh.write(json.dumps(s.to_json(), ensure_ascii=False) + "\n")
