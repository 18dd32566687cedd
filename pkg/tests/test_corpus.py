"""Corpus ingestion, tokenization, stop-word removal, checkpoints."""

import hashlib
from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from philotope.corpus import (STOPWORDS_SHA256, Corpus, CorpusError, balance,
                              load_corpus, load_processed, load_stopwords,
                              preprocess, remove_stopwords, save_processed,
                              tokenize)

from conftest import POETS


# -- tokenize ----------------------------------------------------------------

def test_tokenize_examples():
    assert tokenize("El humo que formó.") == ["el", "humo", "que", "formó"]
    assert tokenize("¡Oh claro honor!") == ["oh", "claro", "honor"]
    assert tokenize("—¿Quién es?—") == ["quién", "es"]
    assert tokenize("") == []
    assert tokenize("...  ,, !!") == []


def test_tokenize_keeps_inner_punctuation():
    # only edge punctuation is stripped
    assert tokenize("d'amor") == ["d'amor"]


def test_tokenize_normalizes_to_nfc():
    composed = "formó"
    decomposed = "formó"
    assert tokenize(decomposed) == tokenize(composed) == ["formó"]


@given(st.text(max_size=80))
def test_tokenize_properties(verse):
    toks = tokenize(verse)
    for tok in toks:
        assert tok == tok.lower()
        assert tok  # no empty tokens


# -- stop-words --------------------------------------------------------------

def test_bundled_stopwords_checksum_and_size():
    data = (resources.files("philotope") / "data" / "stopwords_es.txt"
            ).read_bytes()
    assert hashlib.sha256(data).hexdigest() == STOPWORDS_SHA256
    words = load_stopwords()
    assert len(words) == 315
    for expected in ("el", "la", "que", "de", "y", "en", "los", "se", "un"):
        assert expected in words


def test_stopwords_custom_file(tmp_path):
    f = tmp_path / "sw.txt"
    f.write_text("# comment\nfoo\n\nbar\n", encoding="utf-8")
    assert load_stopwords(f) == {"foo", "bar"}


def test_remove_stopwords_preserves_order():
    toks = ["el", "humo", "que", "formó"]
    assert remove_stopwords(toks, load_stopwords()) == ["humo", "formó"]


# -- load_corpus / balance ---------------------------------------------------

def test_load_corpus_demo(demo_root):
    corpus = load_corpus(demo_root, list(POETS))
    assert corpus.poets == POETS
    for poet in POETS:
        assert corpus.sonnet_count(poet) == 5
        for sonnet in corpus.sonnets[poet]:
            assert len(sonnet) == 14  # sonnets have 14 verses


def test_load_corpus_orders_by_filename(tmp_path):
    d = tmp_path / "poet"
    d.mkdir()
    (d / "b.txt").write_text("second\n", encoding="utf-8")
    (d / "a.txt").write_text("first\n", encoding="utf-8")
    corpus = load_corpus(tmp_path, ["poet"])
    assert corpus.sonnets["poet"] == [["first"], ["second"]]


def test_load_corpus_skips_empty_file(tmp_path, caplog):
    d = tmp_path / "poet"
    d.mkdir()
    (d / "a.txt").write_text("verse\n", encoding="utf-8")
    (d / "empty.txt").write_text("\n \n", encoding="utf-8")
    corpus = load_corpus(tmp_path, ["poet"])
    assert corpus.sonnet_count("poet") == 1


def test_load_corpus_missing_poet(tmp_path):
    with pytest.raises(CorpusError, match="no directory"):
        load_corpus(tmp_path, ["nobody"])


def test_load_corpus_bad_encoding(tmp_path):
    d = tmp_path / "poet"
    d.mkdir()
    (d / "bad.txt").write_bytes(b"\xff\xfe invalid")
    with pytest.raises(CorpusError, match="UTF-8"):
        load_corpus(tmp_path, ["poet"])


def test_load_corpus_missing_root(tmp_path):
    with pytest.raises(CorpusError, match="root"):
        load_corpus(tmp_path / "nope", ["poet"])


def test_balance_truncates_in_order(demo_root):
    corpus = load_corpus(demo_root, list(POETS))
    small = balance(corpus, 3)
    for poet in POETS:
        assert small.sonnets[poet] == corpus.sonnets[poet][:3]


def test_balance_insufficient(demo_root):
    corpus = load_corpus(demo_root, list(POETS))
    with pytest.raises(CorpusError, match="only 5"):
        balance(corpus, 6)
    with pytest.raises(CorpusError):
        balance(corpus, 0)


def test_duplicate_poets_rejected():
    with pytest.raises(CorpusError, match="duplicate"):
        Corpus(poets=("a", "a"), sonnets={"a": [["x"]]})


# -- preprocess --------------------------------------------------------------

def test_preprocess_spec_example():
    corpus = Corpus(poets=("p",), sonnets={"p": [["El humo que formó"]]})
    out = preprocess(corpus, load_stopwords())
    assert out.sonnets["p"] == [[["hum", "form"]]]


def test_preprocess_keeps_structure(demo_corpus, processed):
    assert processed.poets == demo_corpus.poets
    for poet in POETS:
        assert len(processed.sonnets[poet]) == 5
        for raw, cooked in zip(demo_corpus.sonnets[poet],
                               processed.sonnets[poet]):
            assert len(raw) == len(cooked)


def test_tokens_iterator(processed):
    per_poet = sum(len(list(processed.tokens(p))) for p in POETS)
    assert per_poet == len(list(processed.tokens()))


# -- checkpoint round-trip ---------------------------------------------------

def test_processed_round_trip(processed, tmp_path):
    path = tmp_path / "processed.json"
    save_processed(processed, path)
    again = load_processed(path)
    assert again.poets == processed.poets
    assert again.sonnets == processed.sonnets
