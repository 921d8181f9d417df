"""Modern-Chinese word segmentation.

Any callable ``str -> list[str]`` whose output concatenates back to its
input can serve as a segmenter.  The default is forward maximum matching
over a wordlist.
"""

from __future__ import annotations


class MaxMatchSegmenter:
    """Forward maximum matching; unknown characters become one-char words."""

    def __init__(self, wordlist=()):
        self.words = frozenset(w for w in wordlist if w)
        self.max_len = max((len(w) for w in self.words), default=1)

    def __call__(self, text: str) -> list[str]:
        words = self.words
        out = []
        i, n = 0, len(text)
        while i < n:
            for k in range(min(self.max_len, n - i), 1, -1):
                if text[i:i + k] in words:
                    break
            else:
                k = 1
            out.append(text[i:i + k])
            i += k
        return out

    def __reduce__(self):
        return (MaxMatchSegmenter, (sorted(self.words),))


class CharSegmenter:
    """Every character is a word."""

    def __call__(self, text: str) -> list[str]:
        return list(text)


def segment(clause_text: str, wordlist) -> list[str]:
    return MaxMatchSegmenter(wordlist)(clause_text)


def load_wordlist(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def presegmented_words(clauses, segmented: str) -> list[list[str]]:
    """Project an externally segmented paragraph onto its clauses.

    ``segmented`` is the modern paragraph with words separated by
    whitespace.  Word boundaries are cut additionally at clause edges, so
    each clause gets words that concatenate exactly to its text.
    """
    from clausealign.corpus import CorpusError

    tokens = segmented.split()
    stream = "".join(tokens)
    cuts = set()
    pos = 0
    for tok in tokens:
        pos += len(tok)
        cuts.add(pos)

    out = []
    cursor = 0
    for ch in getattr(clauses, "prefix", ""):
        if not ch.isspace():
            if cursor >= len(stream) or stream[cursor] != ch:
                raise CorpusError("modern_segmented does not match modern text")
            cursor += 1
    for clause in clauses:
        seen_text = False
        for piece, is_text in ((clause.text, True), (clause.trailing_delim, False)):
            for ch in piece:
                if ch.isspace():
                    continue
                if cursor >= len(stream) or stream[cursor] != ch:
                    raise CorpusError("modern_segmented does not match modern text")
                if is_text and not seen_text:
                    start = cursor
                    seen_text = True
                cursor += 1
            if is_text:
                end = cursor
        if not seen_text:
            out.append(list(clause.text))
            continue
        words = []
        a = start
        for b in range(start + 1, end + 1):
            if b in cuts or b == end:
                words.append(stream[a:b])
                a = b
        # re-insert interior whitespace that the token stream dropped
        if "".join(words) != clause.text:
            words = _realign_whitespace(words, clause.text)
        out.append(words)
    if cursor != len(stream):
        raise CorpusError("modern_segmented has trailing content not in modern text")
    return out


def _realign_whitespace(words, text):
    out = []
    i = 0
    for w in words:
        start = i
        for ch in w:
            while text[i] != ch:
                i += 1
            i += 1
        out.append(text[start:i])
    if i < len(text):
        out[-1] += text[i:]
    return out
