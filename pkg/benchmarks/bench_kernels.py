"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--paragraphs 200] [--repeat 3]

Micro-benchmarks call both kernel modules directly.  The end-to-end
timing aligns a synthetic corpus once per backend, each in a fresh
interpreter so backend selection happens at import as in normal use.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

import numpy as np

from clausealign import _kernels_py

try:
    from clausealign import _kernels as _compiled
except ImportError:
    _compiled = None

END_TO_END = """
import json, sys, time
from clausealign import kernels
from clausealign.aligner import align_corpus, estimate_length_model
from clausealign.lexicon import build_idf
from clausealign.scoring import AlignmentConfig
from clausealign.segmenter import MaxMatchSegmenter
from clausealign.synthetic import generate_corpus

syn = generate_corpus(int(sys.argv[1]), seed=0, units=(6, 10))
seg = MaxMatchSegmenter(syn.wordlist)
idf = build_idf([seg(r.modern) for r in syn.records])
lm = estimate_length_model(syn.records)
cfg = AlignmentConfig(mu=lm.mu, sigma=lm.sigma)
t0 = time.perf_counter()
res = align_corpus(syn.records, cfg, syn.lexicon, idf, seg)
print(json.dumps({"backend": kernels.BACKEND, "seconds": time.perf_counter() - t0,
                  "pairs": sum(len(r.pairs) for r in res)}))
"""


def _strings(rng, n, lo, hi):
    alphabet = "天下之人皆知美为斯恶已的了是都"
    return [("".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi))),
             "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))) for _ in range(n)]


def _tables(rng, m, n):
    t = [rng.random((m, n)) for _ in range(4)] + [rng.random(m) * 0.1, rng.random(n) * 0.1]
    t[1][0, :] = t[2][:, 0] = t[3][0, :] = t[3][:, 0] = -np.inf
    return t


def micro(repeat):
    rng = random.Random(0)
    pairs = _strings(rng, 2000, 3, 20)
    tables = [_tables(np.random.default_rng(k), 8, 8) for k in range(500)]
    cases = {
        "levenshtein x2000": lambda mod: [mod.levenshtein(a, b) for a, b in pairs],
        "lcs_length x2000": lambda mod: [mod.lcs_length(a, b) for a, b in pairs],
        "dp_fill 8x8 x500": lambda mod: [mod.dp_fill(*t) for t in tables],
    }
    rows = []
    for name, fn in cases.items():
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=repeat))
        c = min(timeit.repeat(lambda: fn(_compiled), number=1, repeat=repeat)) if _compiled else None
        rows.append((name, py, c))
    return rows


def end_to_end(paragraphs):
    out = {}
    for label, env_extra in (("python", {"CLAUSEALIGN_PURE": "1"}), ("compiled", {})):
        env = {k: v for k, v in os.environ.items() if k != "CLAUSEALIGN_PURE"}
        env.update(env_extra)
        proc = subprocess.run([sys.executable, "-c", END_TO_END, str(paragraphs)], env=env,
                              capture_output=True, text=True, check=True)
        out[label] = json.loads(proc.stdout)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paragraphs", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if _compiled is None:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'kernel':<22}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for name, py, c in micro(args.repeat):
        if c is None:
            print(f"{name:<22}{py:>10.4f}{'-':>12}{'-':>9}")
        else:
            print(f"{name:<22}{py:>10.4f}{c:>12.4f}{py / c:>8.1f}x")

    e2e = end_to_end(args.paragraphs)
    print(f"\nalign {args.paragraphs} synthetic paragraphs, 1 process:")
    for label, r in e2e.items():
        print(f"  {label:<9} backend={r['backend']:<9} {r['seconds']:.2f}s  ({r['pairs']} pairs)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
