from datetime import datetime

import pytest
from hypothesis import given, strategies as st

from triagekit.corpus import IssueRecord
from triagekit.textprep import (StopwordList, clean, preprocess,
                                preprocess_text, rainbow_stopwords)


def make_issue(summary="", description=""):
    now = datetime(2020, 1, 1)
    return IssueRecord(key="K-1", summary=summary, description=description,
                       reporter="r", created=now, updated=now)


class TestClean:
    def test_empty(self):
        assert clean("") == ""

    def test_removal_rules(self):
        assert clean("<b>Erro</b> na conexão 0x1F 42.") == "Erro na conexao"

    def test_already_clean(self):
        assert clean("abc") == "abc"

    def test_markup_and_hex(self):
        assert clean("<div class='x'>crash at 0xDEAD</div>") == "crash at"

    def test_decimal_literals(self):
        assert clean("retry 3 times, 2.5 seconds") == "retry times seconds"

    def test_embedded_digits_split(self):
        # Digits inside words are not numeric literals; they still vanish
        # in the non-letter sweep.
        assert clean("abc123def") == "abc def"

    def test_case_preserved(self):
        assert clean("Hello WORLD") == "Hello WORLD"

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        once = clean(text)
        assert clean(once) == once

    @given(st.text(max_size=200))
    def test_output_alphabet(self, text):
        out = clean(text)
        assert all(ch.isalpha() or ch == " " for ch in out)
        assert "  " not in out
        assert out == out.strip()


class TestPreprocess:
    def test_both_empty(self, tiny_stopwords):
        doc = preprocess(make_issue(), tiny_stopwords)
        assert doc.tokens == ()
        assert doc.issue_key == "K-1"

    def test_stopword_then_stem(self):
        sw = StopwordList(frozenset({"the"}))
        doc = preprocess(make_issue(summary="The sitting"), sw)
        assert doc.tokens == ("sit",)

    def test_deterministic(self, stopwords):
        issue = make_issue(summary="Bluetooth pairing fails",
                           description="device reboots <b>randomly</b> 0x3F")
        a = preprocess(issue, stopwords)
        b = preprocess(issue, stopwords)
        assert a == b

    def test_order_preserved(self, tiny_stopwords):
        tokens = preprocess_text("zebra apple", "mango", tiny_stopwords,
                                 stemmer=lambda t: t)
        assert tokens == ("zebra", "apple", "mango")

    def test_summary_joined_before_description(self, tiny_stopwords):
        tokens = preprocess_text("first", "second", tiny_stopwords,
                                 stemmer=lambda t: t)
        assert tokens == ("first", "second")

    @given(st.text(max_size=120), st.text(max_size=120))
    def test_no_short_tokens_or_stopwords_pre_stemming(self, summary, description):
        sw = StopwordList(frozenset({"the", "and", "error"}))
        tokens = preprocess_text(summary, description, sw, stemmer=lambda t: t)
        for tok in tokens:
            assert len(tok) >= 3
            assert tok not in sw
            assert tok.isalpha() and tok == tok.lower()


class TestStopwordList:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            StopwordList(frozenset())

    def test_rejects_uppercase(self):
        with pytest.raises(ValueError):
            StopwordList(frozenset({"The"}))

    def test_from_lines_skips_comments(self):
        sw = StopwordList.from_lines(["# comment", "", "the", "AND "])
        assert sw.words == frozenset({"the", "and"})

    def test_bundled_list(self):
        sw = rainbow_stopwords()
        assert "the" in sw
        assert "above" in sw
        assert len(sw.words) > 400
