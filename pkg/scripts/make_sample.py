"""Regenerate the synthetic files under data/sample/.

    python3 scripts/make_sample.py
"""

import json
import os
import sys

from clausealign.aligner import write_alignments
from clausealign.synthetic import generate_corpus

OUT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "sample")


def main(n=10, seed=7):
    syn = generate_corpus(n, seed=seed, paragraphs_per_article=1)
    with open(os.path.join(OUT, "corpus.jsonl"), "w", encoding="utf-8") as fh:
        for r in syn.records:
            fh.write(json.dumps({"article_id": r.article_id, "paragraph_id": r.paragraph_id,
                                 "ancient": r.ancient, "modern": r.modern}, ensure_ascii=False) + "\n")
    with open(os.path.join(OUT, "gold.jsonl"), "w", encoding="utf-8") as fh:
        write_alignments(syn.gold, fh)
    with open(os.path.join(OUT, "dict.tsv"), "w", encoding="utf-8") as fh:
        for head, definition in syn.dictionary:
            fh.write(f"{head}\t{definition}\n")
    with open(os.path.join(OUT, "wordlist.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(syn.wordlist) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
