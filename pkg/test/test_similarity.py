from rebut._provider.mock import StubScorer
from rebut.similarity import (
    DimensionMismatch,
    EmptyTable,
    InconsistentDimension,
    MalformedLine,
    PairScore,
    WordVectorScorer,
    WordVectorTable,
    ZeroVector,
    cosine,
    embed_document,
    load_word_vectors,
    pair_score,
)
from rebut.textprep import TokenStream
import numpy as np
import pytest


@pytest.fixture
def vectors(tmp_path):
    fname = tmp_path / "vectors.txt"
    fname.write_text(
        "vaccine 1.0 0.0 0.0\n"
        "safe 0.0 1.0 0.0\n"
        "Chips 0.0 0.0 2.0\n"
        "shot 1.0 1.0 0.0\n",
        encoding="utf-8",
    )
    return fname


@pytest.fixture
def table(vectors):
    return load_word_vectors(vectors)


def test_load_word_vectors(table):
    assert len(table) == 4
    assert table.dimension == 3
    assert "chips" in table
    assert "Chips" not in table
    assert table["safe"] == pytest.approx([0.0, 1.0, 0.0])


def test_load_word_vectors_two_lines(tmp_path):
    fname = tmp_path / "v.txt"
    fname.write_text("a 1 2 3\nb 4 5 6\n", encoding="utf-8")
    table = load_word_vectors(fname)
    assert (len(table), table.dimension) == (2, 3)


def test_load_word_vectors_skips_header(tmp_path):
    fname = tmp_path / "v.txt"
    fname.write_text("2 3\na 1 2 3\nb 4 5 6\n", encoding="utf-8")
    assert len(load_word_vectors(fname)) == 2


def test_load_word_vectors_last_duplicate_wins(tmp_path, caplog):
    fname = tmp_path / "v.txt"
    fname.write_text("a 1 0\na 0 1\n", encoding="utf-8")
    table = load_word_vectors(fname)
    assert table["a"] == pytest.approx([0.0, 1.0])
    assert "Duplicate" in caplog.text


def test_load_word_vectors_inconsistent(tmp_path):
    fname = tmp_path / "v.txt"
    fname.write_text("a 1 2 3\nb 4 5 6 7\n", encoding="utf-8")
    with pytest.raises(InconsistentDimension) as e:
        load_word_vectors(fname)
    assert e.value.line_no == 2


@pytest.mark.parametrize("line", ["a 1 x 3\n", "lonely\n"])
def test_load_word_vectors_malformed(tmp_path, line):
    fname = tmp_path / "v.txt"
    fname.write_text(line, encoding="utf-8")
    with pytest.raises(MalformedLine):
        load_word_vectors(fname)


def test_empty_table_fails_on_embed(tmp_path):
    fname = tmp_path / "v.txt"
    fname.write_text("", encoding="utf-8")
    table = load_word_vectors(fname)
    assert len(table) == 0
    with pytest.raises(EmptyTable):
        embed_document(TokenStream(("a",)), table)


def test_embed_document(table):
    oov = embed_document(TokenStream(("nothing", "known")), table)
    assert oov.is_zero
    assert np.all(oov.vector == 0)
    one = embed_document(TokenStream(("vaccine", "unknown")), table)
    assert one.vector == pytest.approx(table["vaccine"])
    assert one.in_vocab_count == 1
    two = embed_document(TokenStream(("vaccine", "safe")), table)
    assert two.vector == pytest.approx([0.5, 0.5, 0.0])


def test_embed_document_of_repetitions(table):
    e = embed_document(TokenStream(("shot",) * 7), table)
    assert e.vector == pytest.approx(table["shot"])
    weighted = embed_document(TokenStream(("vaccine", "vaccine", "safe")), table)
    assert weighted.vector == pytest.approx([2 / 3, 1 / 3, 0.0])


def test_cosine():
    assert cosine([1, 0], [0, 1]) == 0.0
    assert cosine([1, 2], [2, 1]) == pytest.approx(0.8)
    assert cosine([3, 4], [3, 4]) == pytest.approx(1.0)
    assert cosine([1, 2], [2.5, 5]) == pytest.approx(1.0)
    with pytest.raises(ZeroVector):
        cosine([0, 0], [1, 0])
    with pytest.raises(DimensionMismatch):
        cosine([1, 0], [1, 0, 0])


def test_cosine_is_scale_invariant():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a, b = rng.normal(size=5), rng.normal(size=5)
        assert abs(cosine(3.7 * a, b) - cosine(a, b)) < 1e-12


def test_word_vector_scorer(table):
    scorer = WordVectorScorer(table, stopwords={"the", "is"})
    assert scorer.score("the vaccine is safe", "the vaccine is safe") == pytest.approx(1.0)
    assert scorer.score("vaccine", "safe") == 0.0
    # not stemmed, surface words are looked up
    with pytest.raises(ZeroVector):
        scorer.score("vaccines", "safe")


def test_pair_score_is_symmetric(table):
    scorer = WordVectorScorer(table)
    texts = ["vaccine safe", "shot chips", "chips chips vaccine", "safe shot vaccine"]
    for a in texts:
        for b in texts:
            assert pair_score(scorer, a, b).score == pair_score(scorer, b, a).score


def test_pair_score_degenerates(table):
    scorer = WordVectorScorer(table)
    result = pair_score(scorer, "nothing known here", "vaccine")
    assert result == PairScore(0.0, True)
    assert float(pair_score(scorer, "vaccine", "vaccine")) == pytest.approx(1.0)
    assert not pair_score(scorer, "vaccine", "safe").degenerate


def test_pair_score_serializes_non_reentrant_scorers():
    scorer = StubScorer({("a", "b"): 0.5}, reentrant=False)
    assert pair_score(scorer, "b", "a").score == 0.5
    assert not scorer.lock.locked()


def test_word_vector_table_from_dict():
    table = WordVectorTable({"a": np.array([1.0, 0.0])})
    assert table.dimension == 2
    assert "WordVectorTable" in repr(table)
    with pytest.raises(KeyError):
        WordVectorTable({})["a"]


def test_gensim_has_mean_vectors():
    from gensim.models import KeyedVectors

    assert callable(getattr(KeyedVectors, "get_mean_vector", None))
