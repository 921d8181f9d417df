import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clausealign.corpus import (
    ANCIENT,
    MODERN,
    ClauseSeq,
    CorpusError,
    load_corpus,
    load_parallel_text,
    load_split_or_raw,
    split_clauses,
    split_record,
)


def _write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), encoding="utf-8")
    return path


def _rec(a, p, anc="甲，乙。", mod="甲甲，乙乙。"):
    return {"article_id": a, "paragraph_id": p, "ancient": anc, "modern": mod}


class TestSplitClauses:
    def test_basic(self):
        seq = split_clauses("A，B。C！")
        assert seq.texts == ["A", "B", "C"]
        assert [c.trailing_delim for c in seq] == ["，", "。", "！"]

    def test_no_delimiters(self):
        seq = split_clauses("ABC")
        assert seq.texts == ["ABC"]
        assert seq[0].trailing_delim == ""

    def test_consecutive_delimiters_collapse(self):
        # split points after index 1 and 2; the segment between is empty
        seq = split_clauses("A，，B")
        assert seq.texts == ["A", "B"]
        assert seq[0].trailing_delim == "，，"
        assert seq.reconstruct() == "A，，B"

    def test_ascii_delimiters(self):
        assert split_clauses("a, b; c. d!").texts == ["a", "b", "c", "d"]

    def test_question_mark_is_not_a_delimiter(self):
        assert split_clauses("不亦说乎？有朋自远方来。").texts == ["不亦说乎？有朋自远方来"]

    def test_extra_delimiters(self):
        seq = split_clauses("不亦说乎？有朋自远方来。", delimiters=frozenset("，。？"))
        assert seq.texts == ["不亦说乎", "有朋自远方来"]

    def test_leading_delimiter_goes_to_prefix(self):
        seq = split_clauses("。A，B")
        assert seq.prefix == "。"
        assert seq.texts == ["A", "B"]
        assert seq.reconstruct() == "。A，B"

    def test_only_delimiters(self):
        with pytest.raises(CorpusError, match="no clause content"):
            split_clauses("，。！")

    def test_empty(self):
        with pytest.raises(CorpusError):
            split_clauses("")

    def test_char_len(self):
        seq = split_clauses("天下，人。")
        assert [c.char_len for c in seq] == [2, 1]

    def test_language_tag(self):
        assert split_clauses("A", MODERN).language_tag == MODERN
        with pytest.raises(ValueError):
            split_clauses("A", "klingon")

    @given(st.text(alphabet="ab天，。！,;.! ？", min_size=1, max_size=40))
    def test_round_trip_and_length_invariants(self, text):
        try:
            seq = split_clauses(text)
        except CorpusError:
            assert not any(ch not in "，。！,;.! " for ch in text)
            return
        assert seq.reconstruct() == text
        assert all(c.char_len >= 1 for c in seq)
        non_text = len(seq.prefix) + sum(len(c.trailing_delim) for c in seq)
        assert sum(c.char_len for c in seq) + non_text == len(text)
        # idempotent: a clause body never splits further
        for c in seq:
            assert split_clauses(c.text).texts == [c.text]

    def test_json_round_trip(self):
        seq = split_clauses(" A，，B。 C")
        again = ClauseSeq.from_json(seq.to_json(), ANCIENT)
        assert again == seq


class TestLoadCorpus:
    def test_three_records_in_order(self, tmp_path):
        path = _write_jsonl(tmp_path / "c.jsonl", [_rec("a", "1"), _rec("a", "2"), _rec("b", "1")])
        recs = load_corpus(path)
        assert [r.key for r in recs] == [("a", "1"), ("a", "2"), ("b", "1")]

    def test_duplicate_key(self, tmp_path):
        path = _write_jsonl(tmp_path / "c.jsonl", [_rec("a", "1"), _rec("a", "1")])
        with pytest.raises(CorpusError, match="a/1"):
            load_corpus(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("")
        assert load_corpus(path) == []

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(_rec("a", "1")) + "\n{not json\n", encoding="utf-8")
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(path)

    def test_missing_key(self, tmp_path):
        path = _write_jsonl(tmp_path / "c.jsonl", [{"article_id": "a", "paragraph_id": "1", "ancient": "x"}])
        with pytest.raises(CorpusError, match="modern"):
            load_corpus(path)

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_bytes(b'{"article_id": "\xff"}\n')
        with pytest.raises(CorpusError, match="UTF-8"):
            load_corpus(path)

    def test_blank_side_raises_or_collects(self, tmp_path):
        path = _write_jsonl(tmp_path / "c.jsonl", [_rec("a", "1"), _rec("a", "2", mod="  ")])
        with pytest.raises(CorpusError, match="modern"):
            load_corpus(path)
        errors = []
        recs = load_corpus(path, errors=errors)
        assert len(recs) == 1 and errors[0][0] == ("a", "2")

    def test_empty_ids_rejected(self, tmp_path):
        path = _write_jsonl(tmp_path / "c.jsonl", [_rec("", "1")])
        with pytest.raises(CorpusError, match="non-empty"):
            load_corpus(path)


def test_parallel_text(tmp_path):
    (tmp_path / "anc.txt").write_text("甲，乙。\n丙。\n", encoding="utf-8")
    (tmp_path / "mod.txt").write_text("甲甲，乙乙。\n丙丙。\n", encoding="utf-8")
    recs = load_parallel_text(tmp_path / "anc.txt", tmp_path / "mod.txt")
    assert [r.key for r in recs] == [("anc", "1"), ("anc", "2")]
    (tmp_path / "short.txt").write_text("x\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="mismatch"):
        load_parallel_text(tmp_path / "anc.txt", tmp_path / "short.txt")


def test_split_or_raw_accepts_both(tmp_path):
    raw = _write_jsonl(tmp_path / "raw.jsonl", [_rec("a", "1")])
    items = load_split_or_raw(raw)
    split = _write_jsonl(tmp_path / "split.jsonl", [items[0].to_json()])
    again = load_split_or_raw(split)
    assert again[0].ancient == items[0].ancient
    assert again[0].modern == items[0].modern
    assert again[0].record.ancient == "甲，乙。"


def test_presegmented_field():
    from clausealign.corpus import CorpusRecord

    rec = CorpusRecord("a", "1", "甲，乙。", "天下之人，皆知。", "天下 之 人 ， 皆 知 。")
    sr = split_record(rec)
    assert sr.modern_words == [["天下", "之", "人"], ["皆", "知"]]
