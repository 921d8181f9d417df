import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clausealign.aligner import (
    AlignedPair,
    AlignmentError,
    align_corpus,
    align_paragraph,
    estimate_length_model,
    estimate_mode_probs,
    path_total,
    read_alignments,
    score_tables,
    write_alignments,
)
from clausealign.corpus import ANCIENT, MODERN, CorpusRecord, split_clauses
from clausealign.lexicon import IdfTable, Lexicon, build_idf, build_lexicon
from clausealign.scoring import AlignmentConfig, AlignmentMode, drop_score, pair_score
from clausealign.segmenter import CharSegmenter
from clausealign import kernels
from oracles import all_paths, brute_force_best

M = AlignmentMode


def brute_force(src, tgt, config, lexicon, idf, seg):
    s = [c.text for c in src]
    words = [list(seg(c.text)) for c in tgt]
    t = [c.text for c in tgt]

    def step(i0, j0, di, dj):
        mode = M.from_lengths(di, dj)
        if di == 0 or dj == 0:
            return drop_score(mode, config).combined
        w = [x for ws in words[j0:j0 + dj] for x in ws]
        return pair_score("".join(s[i0:i0 + di]), "".join(t[j0:j0 + dj]), w, mode,
                          config, lexicon, idf).combined

    return brute_force_best(len(s), len(t), step)


def seqs(anc, mod):
    return split_clauses(anc, ANCIENT), split_clauses(mod, MODERN)


class TestEstimation:
    def test_length_model(self):
        recs = [CorpusRecord("a", "1", "甲乙，", "甲甲乙乙。"), CorpusRecord("a", "2", "甲", "甲甲甲甲")]
        lm = estimate_length_model(recs)
        assert lm.mu == pytest.approx(0.375)
        assert lm.sigma == pytest.approx(math.sqrt(2 * 0.125 ** 2))

    def test_degenerate_sigma(self):
        recs = [CorpusRecord("a", str(k), "甲", "甲甲") for k in range(3)]
        with pytest.raises(AlignmentError, match="degenerate sigma"):
            estimate_length_model(recs)

    def test_too_few_records(self):
        with pytest.raises(AlignmentError):
            estimate_length_model([CorpusRecord("a", "1", "甲", "甲甲")])

    def test_mode_probs_with_floor(self):
        gold = [AlignedPair((0,), (0,), M.M11)] * 8 + [AlignedPair((0, 1), (0,), M.M21)] * 2
        probs = estimate_mode_probs(gold, floor=1e-4)
        assert probs[M.M11] == 0.8 and probs[M.M21] == 0.2
        assert probs[M.M22] == probs[M.M10] == probs[M.M01] == probs[M.M12] == 1e-4

    def test_mode_probs_empty(self):
        with pytest.raises(AlignmentError):
            estimate_mode_probs([])


class TestAlignedPair:
    def test_mode_must_match_indices(self):
        with pytest.raises(AlignmentError):
            AlignedPair((0, 1), (0,), M.M11)
        with pytest.raises(AlignmentError):
            AlignedPair((0, 2), (0,), M.M21)

    def test_json_round_trip(self, tmp_path):
        pairs = [AlignedPair((0,), (), M.M10, None, "a", "1", "甲，", ""),
                 AlignedPair((1, 2), (0,), M.M21, None, "a", "1", "乙，丙。", "乙丙。")]
        path = tmp_path / "p.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            write_alignments(pairs, fh)
        assert read_alignments(path) == pairs

    def test_from_json_rejects_wrong_mode(self):
        with pytest.raises(AlignmentError):
            AlignedPair.from_json({"article_id": "a", "paragraph_id": "1", "src_indices": [0],
                                   "tgt_indices": [0], "mode": "2-1"})


class TestAlignParagraph:
    def test_one_by_one(self, char_seg, plain_config):
        src, tgt = seqs("天下。", "天下人。")
        pairs = align_paragraph(src, tgt, plain_config, Lexicon(), IdfTable(1, {}, {}), char_seg)
        assert [(p.src_indices, p.tgt_indices, p.mode) for p in pairs] == [((0,), (0,), M.M11)]
        assert pairs[0].src_text == "天下。" and pairs[0].tgt_text == "天下人。"

    def test_two_to_one(self, char_seg, plain_config):
        src, tgt = seqs("AB，CD。", "ABCD。")
        idf = IdfTable(1, {}, {})
        pairs = align_paragraph(src, tgt, plain_config, Lexicon(), idf, char_seg)
        assert [(p.src_indices, p.tgt_indices) for p in pairs] == [((0, 1), (0,))]
        best, path = brute_force(src, tgt, plain_config, Lexicon(), idf, char_seg)
        assert path == ((0, 0, 2, 1),)
        assert path_total(pairs) == pytest.approx(best, abs=1e-12)

    def test_drop_is_chosen_for_unmatched_clause(self, char_seg):
        cfg = AlignmentConfig(mu=1.0, sigma=0.5)
        src, tgt = seqs("AB，QQ，CD。", "AB，CD。")
        pairs = align_paragraph(src, tgt, cfg, Lexicon(), IdfTable(1, {}, {}), char_seg)
        # QQ can only join a neighbour or be dropped; joining dilutes L
        assert [p.mode for p in pairs] == [M.M11, M.M10, M.M11]

    def test_ids_and_presegmented_words(self, char_seg, plain_config):
        src, tgt = seqs("天下。", "天下人。")
        pairs = align_paragraph(src, tgt, plain_config, Lexicon(), IdfTable(1, {}, {}), char_seg,
                                tgt_words=[["天下人"]], article_id="x", paragraph_id="7")
        assert pairs[0].article_id == "x" and pairs[0].paragraph_id == "7"
        # one word holds both chars, so only one exact match: L = 1/2
        assert pairs[0].score.lexical == 0.5
        with pytest.raises(AlignmentError):
            align_paragraph(src, tgt, plain_config, Lexicon(), IdfTable(1, {}, {}), char_seg,
                            tgt_words=[["a"], ["b"]])

    def test_path_total_equals_table_corner(self, char_seg, plain_config):
        src, tgt = seqs("甲乙，丙丁，戊。", "甲乙乙，丙，丁戊。")
        lex, idf = Lexicon(), IdfTable(1, {}, {})
        words = [list(char_seg(c.text)) for c in tgt]
        tables, _ = score_tables(src, tgt, plain_config, lex, idf, words)
        D, _ = kernels.dp_fill(*tables)
        pairs = align_paragraph(src, tgt, plain_config, lex, idf, char_seg)
        assert path_total(pairs) == D[-1, -1]


ALPHA = "ABCDEFGH"
LEX = build_lexicon([("A", "x y"), ("C", "z"), ("E", "x"), ("G", "y w")])
IDF = IdfTable(5, {"x": 2, "y": 1}, {"x": math.log(6 / 3), "y": math.log(6 / 2)})


def random_paragraph(rng, m, n):
    anc = "".join("".join(rng.choice(ALPHA) for _ in range(rng.randint(1, 4))) + "，" for _ in range(m))
    mod_alpha = ALPHA + "xyzw"
    mod = "".join("".join(rng.choice(mod_alpha) for _ in range(rng.randint(1, 6))) + "，" for _ in range(n))
    return seqs(anc, mod)


@given(seed=st.integers(0, 2**31), m=st.integers(1, 4), n=st.integers(1, 4),
       gamma=st.sampled_from([0.0, 0.05, 1.0]), lam=st.sampled_from([0.0, 0.05, 1.0]))
@settings(max_examples=60, deadline=None)
def test_dp_matches_brute_force(seed, m, n, gamma, lam):
    rng = random.Random(seed)
    src, tgt = random_paragraph(rng, m, n)
    cfg = AlignmentConfig(gamma=gamma, lam=lam, mu=0.7, sigma=0.4)
    seg = CharSegmenter()
    pairs = align_paragraph(src, tgt, cfg, LEX, IDF, seg)
    best, _ = brute_force(src, tgt, cfg, LEX, IDF, seg)
    assert abs(path_total(pairs) - best) <= 1e-9


@given(seed=st.integers(0, 2**31), m=st.integers(1, 6), n=st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_alignment_covers_each_clause_once(seed, m, n):
    rng = random.Random(seed)
    src, tgt = random_paragraph(rng, m, n)
    pairs = align_paragraph(src, tgt, AlignmentConfig(mu=0.7, sigma=0.4), LEX, IDF, CharSegmenter())
    src_seen = [i for p in pairs for i in p.src_indices]
    tgt_seen = [j for p in pairs for j in p.tgt_indices]
    assert src_seen == list(range(m))
    assert tgt_seen == list(range(n))
    # the display texts reassemble the paragraph
    assert "".join(p.src_text for p in pairs) == src.reconstruct()
    assert "".join(p.tgt_text for p in pairs) == tgt.reconstruct()


def test_path_count_sanity():
    assert len(all_paths(4, 4)) == 697
    assert len(all_paths(1, 1)) == 3


def test_lcs_scorer_aligns_with_same_schema(char_seg):
    src, tgt = seqs("甲乙，丙丁。", "甲乙X，丙丁Y。")
    cfg = AlignmentConfig(mu=0.7, sigma=0.4, scorer="lcs")
    pairs = align_paragraph(src, tgt, cfg, Lexicon(), IdfTable(1, {}, {}), char_seg)
    assert [p.mode for p in pairs] == [M.M11, M.M11]
    assert pairs[0].score.lexical == pytest.approx(2 / 3)
    assert set(pairs[0].to_json()) == set(align_paragraph(
        src, tgt, cfg.with_(scorer="combined"), Lexicon(), IdfTable(1, {}, {}), char_seg)[0].to_json())


class TestAlignCorpus:
    def _records(self):
        return [
            CorpusRecord("a", "1", "甲乙，丙。", "甲乙，丙丙。"),
            CorpusRecord("a", "2", "，。", "甲。"),  # no clause content on the ancient side
            CorpusRecord("b", "1", "丁。", "丁丁。"),
        ]

    def test_order_and_errors(self, char_seg, plain_config):
        idf = build_idf([["甲"], ["丁"]])
        res = align_corpus(self._records(), plain_config, Lexicon(), idf, char_seg)
        assert [r.key for r in res] == [("a", "1"), ("a", "2"), ("b", "1")]
        assert res[1].error and not res[1].pairs
        assert res[0].error is None and len(res[0].pairs) == 2

    def test_worker_count_does_not_change_output(self, plain_config):
        from clausealign.synthetic import generate_corpus

        syn = generate_corpus(12, seed=5)
        idf = build_idf([list(r.modern) for r in syn.records])
        seg = CharSegmenter()
        one = align_corpus(syn.records, plain_config, syn.lexicon, idf, seg, jobs=1)
        two = align_corpus(syn.records, plain_config, syn.lexicon, idf, seg, jobs=2)
        assert [[p.to_json() for p in r.pairs] for r in one] == [[p.to_json() for p in r.pairs] for r in two]

    def test_deterministic(self, char_seg, plain_config):
        idf = IdfTable(1, {}, {})
        a = align_corpus(self._records(), plain_config, Lexicon(), idf, char_seg)
        b = align_corpus(self._records(), plain_config, Lexicon(), idf, char_seg)
        assert [r.pairs for r in a] == [r.pairs for r in b]


def test_unreachable_backtrace():
    from clausealign.aligner import backtrace

    back = np.zeros((2, 2), dtype=np.int8)
    with pytest.raises(AlignmentError):
        backtrace(back)
