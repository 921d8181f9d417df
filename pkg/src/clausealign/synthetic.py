"""Synthetic ancient/modern paragraph pairs with known clause alignment.

Each ancient character maps to a modern word.  About half of the words
contain the ancient character itself (reachable by exact matching); the
rest are unrelated characters listed as the character's dictionary
definition (reachable only through the dictionary).  Modern clauses are
the concatenated expansions plus occasional filler characters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from clausealign.aligner import AlignedPair
from clausealign.corpus import CorpusRecord
from clausealign.lexicon import Lexicon, build_lexicon
from clausealign.scoring import AlignmentMode

# disjoint CJK blocks so the three alphabets never collide
_ANCIENT_BASE = 0x4E00
_MODERN_BASE = 0x6000
_FILLER_BASE = 0x8000


@dataclass
class SyntheticCorpus:
    records: list[CorpusRecord]
    gold: list[AlignedPair]
    lexicon: Lexicon
    wordlist: list[str]
    dictionary: list[tuple[str, str]]


def _alphabet(base, size):
    return [chr(base + k) for k in range(size)]


def make_vocabulary(rng: random.Random, n_ancient: int = 300, exact_rate: float = 0.5):
    """Ancient char -> modern expansion word, plus dictionary entries."""
    ancient = _alphabet(_ANCIENT_BASE, n_ancient)
    modern = _alphabet(_MODERN_BASE, 2 * n_ancient)
    expansion = {}
    dictionary = []
    for a in ancient:
        if rng.random() < exact_rate:
            m = rng.choice(modern)
            expansion[a] = a + m if rng.random() < 0.5 else m + a
        else:
            word = "".join(rng.sample(modern, 2))
            expansion[a] = word
            dictionary.append((a, " ".join(word)))
    return ancient, expansion, dictionary


def _ancient_clause(rng, alphabet, lo, hi):
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def _modern_words(rng, clause, expansion, fillers, filler_rate):
    words = []
    for a in clause:
        words.append(expansion[a])
        if rng.random() < filler_rate:
            words.append(rng.choice(fillers))
    return words


def generate_corpus(n_paragraphs: int, seed: int = 0, units=(4, 10), clause_len=(3, 8),
                    merge_rate: float = 0.10, drop_rate: float = 0.05, filler_rate: float = 0.2,
                    paragraphs_per_article: int = 5, n_ancient: int = 300) -> SyntheticCorpus:
    """Build ``n_paragraphs`` paragraph pairs and their gold alignment.

    Each paragraph has ``units`` alignment units.  A unit is a drop with
    probability ``drop_rate`` (1-0 or 0-1 evenly), a merge with
    probability ``merge_rate`` (2-1 or 1-2 evenly), else 1-1.
    """
    rng = random.Random(seed)
    ancient, expansion, dictionary = make_vocabulary(rng, n_ancient)
    fillers = _alphabet(_FILLER_BASE, 40)
    lo, hi = clause_len

    records, gold = [], []
    for p in range(n_paragraphs):
        article_id = f"art{p // paragraphs_per_article:04d}"
        paragraph_id = f"p{p:05d}"
        anc_clauses: list[str] = []
        mod_clauses: list[str] = []
        units_here = []
        for _ in range(rng.randint(*units)):
            r = rng.random()
            if r < drop_rate:
                kind = "1-0" if rng.random() < 0.5 else "0-1"
            elif r < drop_rate + merge_rate:
                kind = "2-1" if rng.random() < 0.5 else "1-2"
            else:
                kind = "1-1"
            si, ti = len(anc_clauses), len(mod_clauses)
            if kind == "1-0":
                anc_clauses.append(_ancient_clause(rng, ancient, lo, hi))
            elif kind == "0-1":
                mod_clauses.append("".join(rng.choice(fillers) for _ in range(rng.randint(2 * lo, 2 * hi))))
            elif kind == "1-1":
                a = _ancient_clause(rng, ancient, lo, hi)
                anc_clauses.append(a)
                mod_clauses.append("".join(_modern_words(rng, a, expansion, fillers, filler_rate)))
            elif kind == "2-1":
                a1 = _ancient_clause(rng, ancient, lo, hi)
                a2 = _ancient_clause(rng, ancient, lo, hi)
                anc_clauses += [a1, a2]
                mod_clauses.append("".join(_modern_words(rng, a1 + a2, expansion, fillers, filler_rate)))
            else:  # 1-2
                a = _ancient_clause(rng, ancient, max(lo, 4), hi + 2)
                anc_clauses.append(a)
                cut = rng.randint(2, len(a) - 2)
                mod_clauses.append("".join(_modern_words(rng, a[:cut], expansion, fillers, filler_rate)))
                mod_clauses.append("".join(_modern_words(rng, a[cut:], expansion, fillers, filler_rate)))
            mode = AlignmentMode(kind)
            units_here.append((mode, si, ti))

        if not anc_clauses or not mod_clauses:
            # a paragraph made only of drops on one side; give it a 1-1 unit
            a = _ancient_clause(rng, ancient, lo, hi)
            units_here.append((AlignmentMode.M11, len(anc_clauses), len(mod_clauses)))
            anc_clauses.append(a)
            mod_clauses.append("".join(_modern_words(rng, a, expansion, fillers, filler_rate)))

        anc_text = "".join(c + ("。" if k == len(anc_clauses) - 1 else "，")
                           for k, c in enumerate(anc_clauses))
        mod_text = "".join(c + ("。" if k == len(mod_clauses) - 1 else "，")
                           for k, c in enumerate(mod_clauses))
        records.append(CorpusRecord(article_id, paragraph_id, anc_text, mod_text))
        for mode, si, ti in units_here:
            gold.append(AlignedPair(tuple(range(si, si + mode.src_len)),
                                    tuple(range(ti, ti + mode.tgt_len)),
                                    mode, None, article_id, paragraph_id))

    wordlist = sorted(set(expansion.values()))
    lexicon = build_lexicon(dictionary)
    return SyntheticCorpus(records, gold, lexicon, wordlist, dictionary)
