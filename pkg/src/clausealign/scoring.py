"""Clause-pair scores: lexical coverage, length/mode statistics, edit
similarity, their weighted sum, and the LCS baseline."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal

from clausealign import kernels
from clausealign.lexicon import IdfTable, Lexicon

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class ScoringError(ValueError):
    pass


class AlignmentMode(enum.Enum):
    M10 = "1-0"
    M01 = "0-1"
    M11 = "1-1"
    M12 = "1-2"
    M21 = "2-1"
    M22 = "2-2"

    @property
    def src_len(self) -> int:
        return int(self.value[0])

    @property
    def tgt_len(self) -> int:
        return int(self.value[2])

    @property
    def key(self) -> str:
        return "p_" + self.value.replace("-", "_")

    @classmethod
    def from_lengths(cls, n_src: int, n_tgt: int) -> "AlignmentMode":
        try:
            return cls(f"{n_src}-{n_tgt}")
        except ValueError:
            raise ScoringError(f"unsupported alignment mode {n_src}-{n_tgt}") from None


MODES = tuple(AlignmentMode)
DROP_MODES = (AlignmentMode.M10, AlignmentMode.M01)

DEFAULT_MODE_PROBS = {
    AlignmentMode.M10: 0.01,
    AlignmentMode.M01: 0.01,
    AlignmentMode.M11: 0.89,
    AlignmentMode.M12: 0.04,
    AlignmentMode.M21: 0.04,
    AlignmentMode.M22: 0.01,
}

SCORERS = ("combined", "lcs")


@dataclass(frozen=True)
class AlignmentConfig:
    beta: float = 5.0
    gamma: float = 0.05
    lam: float = 0.05
    mu: float = 1.0
    sigma: float = 1.0
    mode_probs: dict = field(default_factory=lambda: dict(DEFAULT_MODE_PROBS))
    # ablation switches
    use_lexical: bool = True
    use_statistical: bool = True
    use_edit: bool = True
    use_dictionary: bool = True
    scorer: str = "combined"

    def __post_init__(self):
        if not self.beta > 0:
            raise ScoringError("beta must be positive")
        if self.gamma < 0 or self.lam < 0:
            raise ScoringError("gamma and lambda must be non-negative")
        if not self.sigma > 0:
            raise ScoringError("sigma must be positive")
        for mode, p in self.mode_probs.items():
            if not isinstance(mode, AlignmentMode):
                raise ScoringError(f"unsupported alignment mode {mode!r}")
            if not 0.0 <= p <= 1.0:
                raise ScoringError(f"probability for {mode.value} outside [0, 1]")
        if self.scorer not in SCORERS:
            raise ScoringError(f"unknown scorer {self.scorer!r}")

    def prob(self, mode: AlignmentMode) -> float:
        try:
            return self.mode_probs[mode]
        except KeyError:
            raise ScoringError(f"unestimated mode {mode.value}") from None

    def with_(self, **kw) -> "AlignmentConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        out = {"beta": self.beta, "gamma": self.gamma, "lambda": self.lam,
               "mu": self.mu, "sigma": self.sigma}
        for mode in MODES:
            if mode in self.mode_probs:
                out[mode.key] = self.mode_probs[mode]
        return out


CONFIG_KEYS = ("beta", "gamma", "lambda", "mu", "sigma") + tuple(m.key for m in MODES)


def _decimal(v: float) -> str:
    return format(Decimal(repr(float(v))), "f")


def format_config(config: AlignmentConfig) -> str:
    return "".join(f"{k} = {_decimal(v)}\n" for k, v in config.to_dict().items())


def parse_config(text: str, **overrides) -> AlignmentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScoringError(f"config line {lineno}: expected key = value")
        k, v = (p.strip() for p in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise ScoringError(f"config line {lineno}: unknown key {k!r}")
        try:
            values[k] = float(v)
        except ValueError:
            raise ScoringError(f"config line {lineno}: {v!r} is not a number") from None
    probs = {m: values.pop(m.key) for m in MODES if m.key in values}
    kw = {"mode_probs": probs}
    for k, attr in (("beta", "beta"), ("gamma", "gamma"), ("lambda", "lam"),
                    ("mu", "mu"), ("sigma", "sigma")):
        if k in values:
            kw[attr] = values[k]
    kw.update(overrides)
    return AlignmentConfig(**kw)


def read_config(path, **overrides) -> AlignmentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)


def write_config(config: AlignmentConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_config(config))


@dataclass(frozen=True)
class ScoreBreakdown:
    lexical: float
    statistical: float
    edit: float
    combined: float


def lexical_score(s: str, t_words, lexicon: Lexicon, idf: IdfTable, beta: float,
                  use_dictionary: bool = True) -> float:
    """Coverage of ancient clause ``s`` by modern words ``t_words``.

    Exact pass: each ancient character consumes the leftmost remaining
    word that contains it.  Dictionary pass: each unmatched character
    scores the IDF mass of its definition characters found in the
    remaining modern text (each modern character usable once per ancient
    character), scaled by ``beta`` and capped at 1.
    """
    if not s:
        raise ScoringError("ancient clause is empty")
    if not beta > 0:
        raise ScoringError("beta must be positive")

    # char -> ascending indices of words containing it
    where: dict[str, list[int]] = {}
    for k, w in enumerate(t_words):
        for ch in set(w):
            where.setdefault(ch, []).append(k)
    taken = [False] * len(t_words)
    cursor: dict[str, int] = {}
    exact = 0
    unmatched = []
    for c in s:
        idx = where.get(c)
        if idx is None:
            unmatched.append(c)
            continue
        p = cursor.get(c, 0)
        while p < len(idx) and taken[idx[p]]:
            p += 1
        cursor[c] = p
        if p < len(idx):
            taken[idx[p]] = True
            exact += 1
        else:
            unmatched.append(c)

    n = len(s)
    term1 = exact / n
    if not use_dictionary or not unmatched:
        return term1

    avail: dict[str, int] = {}
    for k, w in enumerate(t_words):
        if not taken[k]:
            for ch in w:
                avail[ch] = avail.get(ch, 0) + 1
    if not avail:
        return term1

    entries = lexicon.entries
    dict_total = 0.0
    for c in unmatched:
        definition = entries.get(c)
        if not definition:
            continue
        used: dict[str, int] = {}
        acc = 0.0
        for d in definition:
            u = used.get(d, 0)
            if u < avail.get(d, 0):
                used[d] = u + 1
                acc += idf.get(d)
        dict_total += min(1.0, beta * acc)
    return term1 + dict_total / n


def normal_pdf(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def statistical_score(s_len: int, t_len: int, mode: AlignmentMode, config: AlignmentConfig) -> float:
    """Length-ratio density times the mode prior."""
    if s_len < 1 or t_len < 1:
        raise ScoringError("statistical score needs non-empty clauses on both sides")
    prior = config.prob(mode)
    return normal_pdf((s_len / t_len - config.mu) / config.sigma) * prior


def levenshtein(a: str, b: str) -> int:
    return kernels.levenshtein(a, b)


def edit_score(s: str, t: str) -> float:
    longest = max(len(s), len(t))
    if longest == 0:
        raise ScoringError("edit score undefined for two empty strings")
    return 1.0 - kernels.levenshtein(s, t) / longest


def lcs_score(s: str, t: str) -> float:
    longest = max(len(s), len(t))
    if longest == 0:
        raise ScoringError("LCS score undefined for two empty strings")
    return kernels.lcs_length(s, t) / longest


def combine(lexical: float, statistical: float, edit: float, config: AlignmentConfig) -> ScoreBreakdown:
    return ScoreBreakdown(lexical, statistical, edit,
                          lexical + config.gamma * statistical + config.lam * edit)


def drop_score(mode: AlignmentMode, config: AlignmentConfig) -> ScoreBreakdown:
    """Score of a 1-0 or 0-1 step: the mode prior alone."""
    if config.scorer == "lcs":
        return ScoreBreakdown(0.0, 0.0, 0.0, 0.0)
    s = config.prob(mode) if config.use_statistical else 0.0
    return combine(0.0, s, 0.0, config)


def pair_score(s: str, t: str, t_words, mode: AlignmentMode, config: AlignmentConfig,
               lexicon: Lexicon, idf: IdfTable) -> ScoreBreakdown:
    """Score two non-empty spans whose modern side is pre-segmented.

    With ``scorer == "lcs"`` the LCS similarity is reported in the lexical
    slot and the other terms are zero, so ``combined`` still equals
    ``lexical + gamma*statistical + lam*edit``.
    """
    if config.scorer == "lcs":
        v = lcs_score(s, t)
        return ScoreBreakdown(v, 0.0, 0.0, v)
    lex = (lexical_score(s, t_words, lexicon, idf, config.beta, config.use_dictionary)
           if config.use_lexical else 0.0)
    stat = statistical_score(len(s), len(t), mode, config) if config.use_statistical else 0.0
    ed = edit_score(s, t) if config.use_edit else 0.0
    return combine(lex, stat, ed, config)


def combined_score(s_span, t_span, mode: AlignmentMode, config: AlignmentConfig,
                   lexicon: Lexicon, idf: IdfTable, segmenter) -> ScoreBreakdown:
    """Score one alignment step.

    A span is a string, a sequence of clause texts (merged in order, each
    clause segmented on its own), or None for the empty side of a drop.
    """
    if s_span is None and t_span is None:
        raise ScoringError("both spans are NULL")
    if (s_span is None) != (mode is AlignmentMode.M01) or (t_span is None) != (mode is AlignmentMode.M10):
        raise ScoringError(f"spans inconsistent with mode {mode.value}")
    if mode in DROP_MODES:
        return drop_score(mode, config)
    if isinstance(s_span, str):
        s_span = [s_span]
    if isinstance(t_span, str):
        t_span = [t_span]
    words = [w for clause in t_span for w in segmenter(clause)]
    return pair_score("".join(s_span), "".join(t_span), words, mode, config, lexicon, idf)
