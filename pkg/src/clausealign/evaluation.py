"""Alignment precision/recall/F1, corpus BLEU, and hyper-parameter search."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field

from clausealign.aligner import align_corpus

log = logging.getLogger(__name__)


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    n_predicted: int
    n_gold: int
    n_correct: int


def prf_from_counts(n_predicted: int, n_gold: int, n_correct: int) -> PRF:
    p = n_correct / n_predicted if n_predicted else 0.0
    r = n_correct / n_gold if n_gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return PRF(p, r, f, n_predicted, n_gold, n_correct)


def alignment_prf(predicted, gold, include_drops: bool = True) -> PRF:
    """Exact-match scoring on (paragraph, source indices, target indices)."""
    def ids(pairs):
        return {p.identity for p in pairs if include_drops or not p.is_drop}

    pred_ids, gold_ids = ids(predicted), ids(gold)
    return prf_from_counts(len(pred_ids), len(gold_ids), len(pred_ids & gold_ids))


@dataclass(frozen=True)
class BleuReport:
    bleu: tuple[float, ...]        # cumulative BLEU-1..max_n, 0-100 scale
    precisions: tuple[float, ...]  # modified n-gram precisions p_1..p_max_n
    brevity_penalty: float
    hyp_len: int
    ref_len: int


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(hypotheses, references, max_n: int = 4) -> BleuReport:
    """Corpus BLEU with clipped n-gram counts and a single reference.

    Precisions are pooled over the corpus; a zero precision at order k
    zeroes cumulative BLEU for k and above.
    """
    hypotheses, references = list(hypotheses), list(references)
    if len(hypotheses) != len(references):
        raise EvalError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EvalError("empty corpus")

    matched = [0] * max_n
    possible = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            h = _ngrams(hyp, n)
            r = _ngrams(ref, n)
            matched[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            possible[n - 1] += max(len(hyp) - n + 1, 0)

    precisions = tuple(m / p if p else 0.0 for m, p in zip(matched, possible))
    if hyp_len == 0:
        bp = 0.0
    elif hyp_len >= ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len / hyp_len)

    scores = []
    log_sum = 0.0
    for n, p in enumerate(precisions, 1):
        if p == 0.0 or math.isinf(log_sum):
            log_sum = -math.inf
            scores.append(0.0)
            continue
        log_sum += math.log(p)
        scores.append(100.0 * bp * math.exp(log_sum / n))
    return BleuReport(tuple(scores), precisions, bp, hyp_len, ref_len)


def tokenize(line: str, mode: str = "char") -> list[str]:
    if mode == "char":
        return [ch for ch in line if not ch.isspace()]
    if mode == "space":
        return line.split()
    raise EvalError(f"unknown tokenization {mode!r}")


@dataclass
class GridPoint:
    beta: float
    gamma: float
    lam: float
    f1: float = 0.0
    precision: float = 0.0
    recall: float = 0.0
    error: str | None = None


@dataclass
class GridResult:
    best: object  # AlignmentConfig
    table: list[GridPoint] = field(default_factory=list)

    def to_tsv(self) -> str:
        lines = ["beta\tgamma\tlambda\tf1\tprecision"]
        for g in self.table:
            if g.error:
                lines.append(f"{g.beta:g}\t{g.gamma:g}\t{g.lam:g}\tfailed\tfailed")
            else:
                lines.append(f"{g.beta:g}\t{g.gamma:g}\t{g.lam:g}\t{100 * g.f1:.1f}\t{100 * g.precision:.1f}")
        return "\n".join(lines) + "\n"


def evaluate_config(dev_records, gold, config, lexicon, idf, segmenter, jobs: int = 1,
                    include_drops: bool = True) -> PRF:
    results = align_corpus(dev_records, config, lexicon, idf, segmenter, jobs=jobs,
                           progress_every=0)
    failed = [r for r in results if r.error]
    if failed:
        raise EvalError(f"{len(failed)} paragraphs failed to align, first: {failed[0].error}")
    predicted = [p for r in results for p in r.pairs]
    return alignment_prf(predicted, gold, include_drops)


def grid_search(dev_records, gold, betas, gammas, lambdas, base_config, lexicon, idf, segmenter,
                jobs: int = 1, include_drops: bool = True) -> GridResult:
    """Evaluate F1 at every (beta, gamma, lambda) and keep the best.

    Length model and mode priors come from ``base_config``.  Ties go to
    the lexicographically smallest (beta, gamma, lambda).  A point that
    fails is recorded with its error and skipped.
    """
    betas, gammas, lambdas = list(betas), list(gammas), list(lambdas)
    if not (betas and gammas and lambdas):
        raise EvalError("every grid axis needs at least one value")

    table = []
    best_key = None
    best_cfg = None
    for beta, gamma, lam in itertools.product(betas, gammas, lambdas):
        point = GridPoint(beta, gamma, lam)
        try:
            cfg = base_config.with_(beta=beta, gamma=gamma, lam=lam)
            prf = evaluate_config(dev_records, gold, cfg, lexicon, idf, segmenter, jobs,
                                  include_drops)
        except Exception as e:  # a bad grid point must not stop the search
            point.error = f"{type(e).__name__}: {e}"
            log.warning("grid point beta=%g gamma=%g lambda=%g failed: %s", beta, gamma, lam, e)
            table.append(point)
            continue
        point.f1, point.precision, point.recall = prf.f1, prf.precision, prf.recall
        table.append(point)
        key = (-prf.f1, beta, gamma, lam)
        if best_key is None or key < best_key:
            best_key, best_cfg = key, cfg
    if best_cfg is None:
        raise EvalError("every grid point failed")
    return GridResult(best_cfg, table)
