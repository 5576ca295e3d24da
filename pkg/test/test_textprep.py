from rebut.textprep import (
    TokenStream,
    load_stopwords,
    normalize,
    prepare,
    stem,
    token_spans,
    tokenize,
)
import pytest


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("", ()),
        ("Got my #pfizer shot!", ("Got", "my", "#pfizer", "shot")),
        ("COVID-19 vaccine", ("COVID-19", "vaccine")),
        ("see https://example.org/a?b=1 now", ("see", "https://example.org/a?b=1", "now")),
        ("... !!! ???", ()),
        ("don't @cdcgov", ("don't", "@cdcgov")),
    ],
)
def test_tokenize(text, tokens):
    assert tokenize(text).tokens == tokens


def test_token_spans_index_into_text():
    text = "Got my #pfizer shot!"
    for token, start, end in token_spans(text):
        assert text[start:end] == token


def test_tokenstream_rejects_empty_tokens():
    with pytest.raises(ValueError):
        TokenStream(("a", ""))


def test_normalize():
    stream = TokenStream(("The", "Vaccines"))
    assert normalize(stream, {"the"}, stem=True).tokens == ("vaccin",)
    assert normalize(TokenStream(()), {"the"}).tokens == ()


def test_normalize_protects_hashtags_and_urls():
    stream = TokenStream(("#pfizer", "#The", "http://x.org/Running"))
    out = normalize(stream, {"#the", "the"}, stem=True)
    assert out.tokens == ("#pfizer", "#the", "http://x.org/running")


def test_normalize_without_stemming():
    out = normalize(TokenStream(("Vaccines", "the")), {"the"}, stem=False)
    assert out.tokens == ("vaccines",)


def test_normalize_keeps_source_id():
    assert normalize(TokenStream(("a",), "t1")).source_id == "t1"


@pytest.mark.parametrize(
    "text",
    [
        "The Vaccines are being distributed to hospitals",
        "Got my #pfizer shot, feeling generous and relational",
        "conditional agreement of the operational authorities",
    ],
)
def test_normalize_is_idempotent(text):
    stops = load_stopwords()
    once = prepare(text, stops)
    assert normalize(once, stops) == once


def test_stem_reaches_fixpoint():
    for word in ("generalization", "relational", "vaccines", "operation"):
        s = stem(word)
        assert stem(s) == s


def test_load_stopwords(tmp_path):
    default = load_stopwords()
    assert "the" in default
    assert "vaccine" not in default
    fname = tmp_path / "stops.txt"
    fname.write_text("# comment\nFoo\n\nbar\n", encoding="utf-8")
    assert load_stopwords(fname) == frozenset({"foo", "bar"})


def test_prepare():
    out = prepare("Got my #pfizer shot!", load_stopwords(), source_id="t1")
    assert out.tokens == ("got", "#pfizer", "shot")
    assert out.source_id == "t1"
