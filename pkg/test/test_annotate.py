from rebut._provider.mock import StubTagger
from rebut.annotate import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    VAC_TYPE,
    DocMismatch,
    EntitySpan,
    Gazetteer,
    Lexicon,
    MalformedEntry,
    SentimentLabel,
    classify_sentiment,
    entity_coverage,
    evaluate_ner,
    load_gazetteer,
    load_lexicon,
    polarity_of,
    recognize,
    relabel_summary,
)
import math
import numpy as np
import pytest


@pytest.fixture(scope="module")
def gazetteer():
    return load_gazetteer()


def span(text, surface, label=VAC_TYPE, occurrence=0):
    start = -1
    for _ in range(occurrence + 1):
        start = text.index(surface, start + 1)
    return EntitySpan(surface, start, start + len(surface), label)


def test_default_gazetteer(gazetteer):
    assert set(gazetteer.terms) == {VAC_TYPE}
    for term in ("pfizer", "#pfizer", "johnsonandjohnson", "johnson and johnson", "novavax"):
        assert term in gazetteer.terms[VAC_TYPE]
    assert gazetteer.longest == 3


def test_recognize(gazetteer):
    text = "got my pfizer booster today"
    assert recognize(text, gazetteer) == [span(text, "pfizer"), span(text, "booster")]
    assert recognize("", gazetteer) == []


def test_recognize_is_case_insensitive(gazetteer):
    text = "Got my PFIZER and a #Pfizer selfie"
    assert recognize(text, gazetteer) == [span(text, "PFIZER"), span(text, "#Pfizer")]


def test_recognize_longest_match(gazetteer):
    text = "johnson and johnson shipment"
    (s,) = recognize(text, gazetteer)
    assert (s.surface, s.start, s.end, s.label) == ("johnson and johnson", 0, 19, VAC_TYPE)
    assert [s.surface for s in recognize("johnson shipment", gazetteer)] == ["johnson"]


def test_recognize_respects_token_boundaries(gazetteer):
    assert recognize("modernity and pfizers", gazetteer) == []


@pytest.mark.parametrize("apostrophe", ["'", "’"])
def test_recognize_possessive(gazetteer, apostrophe):
    text = f"Pfizer{apostrophe}s booster is out"
    assert recognize(text, gazetteer) == [
        EntitySpan("Pfizer", 0, 6, VAC_TYPE),
        span(text, "booster"),
    ]


def test_recognize_offsets_index_the_decoded_text(gazetteer):
    text = "Ärzte empfehlen pfizer 💉 und booster"
    spans = recognize(text, gazetteer)
    assert [(s.start, s.end) for s in spans] == [(16, 22), (29, 36)]
    assert all(text[s.start : s.end] == s.surface for s in spans)


def test_recognize_hyphenated_names(gazetteer):
    text = "the Pfizer-BioNTech shot"
    assert recognize(text, gazetteer) == [
        EntitySpan("Pfizer", 4, 10, VAC_TYPE),
        EntitySpan("BioNTech", 11, 19, VAC_TYPE),
    ]
    gaz = Gazetteer({VAC_TYPE: frozenset({"oxford-astrazeneca"})})
    (s,) = recognize("an Oxford-AstraZeneca dose", gaz)
    assert (s.surface, s.start, s.end) == ("Oxford-AstraZeneca", 3, 21)
    assert recognize("follow @pfizer-news", gazetteer) == []


def test_gazetteer_overrides_base_labels(gazetteer):
    text = "Pfizer shipped doses to Berlin"
    base = StubTagger({"Pfizer": "ORG", "Berlin": "GPE", "Pfizer shipped": "ORG"})
    spans = recognize(text, gazetteer, base)
    assert spans == [span(text, "Pfizer"), span(text, "Berlin", "GPE")]


def test_relabel_summary(gazetteer):
    texts = ["Pfizer works", "I trust Pfizer", "Oxford is a city", "nothing"]
    base = StubTagger({"Pfizer": "ORG", "Oxford": "GPE", "city": "MISC"})
    summary = relabel_summary(texts, gazetteer, base)
    assert summary.counts == {("pfizer", "ORG", VAC_TYPE): 2, ("oxford", "GPE", VAC_TYPE): 1}
    assert summary.total == 3
    assert summary.share() == 1.0
    assert summary.to_dict()["relabels"][0]["surface"] == "pfizer"


def test_gazetteer_validation():
    with pytest.raises(ValueError):
        Gazetteer({"A": frozenset({"x"}), "B": frozenset({"x"})})
    with pytest.raises(ValueError):
        Gazetteer({"A": frozenset({"Pfizer"})})
    assert len(Gazetteer({"A": frozenset({"x", "y z"})})) == 2


def test_load_gazetteer(tmp_path):
    fname = tmp_path / "gaz.tsv"
    fname.write_text("# comment\nDRUG\tIbuprofen\nDRUG\tvitamin d\n\n", encoding="utf-8")
    gaz = load_gazetteer(fname)
    assert gaz.terms == {"DRUG": frozenset({"ibuprofen", "vitamin d"})}
    text = "Vitamin D beats ibuprofen"
    assert [s.surface for s in recognize(text, gaz)] == ["Vitamin D", "ibuprofen"]
    fname.write_text("DRUG ibuprofen\n", encoding="utf-8")
    with pytest.raises(MalformedEntry):
        load_gazetteer(fname)


def test_entity_span_validation():
    with pytest.raises(ValueError):
        EntitySpan("abc", 3, 3, VAC_TYPE)
    with pytest.raises(ValueError):
        EntitySpan("abc", 0, 4, VAC_TYPE)
    s = EntitySpan("pfizer", 7, 13, VAC_TYPE)
    assert EntitySpan.from_dict(s.to_dict()) == s
    assert s.overlaps(12, 20)
    assert not s.overlaps(13, 20)


def test_entity_coverage(gazetteer):
    assert entity_coverage(["pfizer works", "nothing", "my booster"], gazetteer) == (2, 2 / 3)
    assert entity_coverage(["", ""], gazetteer) == (0, 0.0)
    assert entity_coverage([], gazetteer) == (0, 0.0)


# -----------------------------------------------------------------------------
def test_evaluate_ner():
    gold = [[EntitySpan("a", 0, 1, "X"), EntitySpan("b", 2, 3, "X")], [EntitySpan("c", 0, 1, "X"), EntitySpan("d", 2, 3, "Y")]]
    exact = evaluate_ner(gold, gold)
    assert exact.to_dict() == {"accuracy": 1.0, "precision": 1.0, "recall": 1.0, "f1": 1.0}
    half = evaluate_ner([gold[0], []], gold)
    assert half.precision == 1.0
    assert half.recall == 0.5
    assert half.f1 == pytest.approx(2 / 3)
    assert half.accuracy == 0.5


def test_evaluate_ner_wrong_label_is_a_miss():
    gold = [[EntitySpan("pfizer", 0, 6, VAC_TYPE)]]
    pred = [[EntitySpan("pfizer", 0, 6, "ORG")]]
    assert evaluate_ner(pred, gold).f1 == 0.0


def test_evaluate_ner_edge_cases():
    assert evaluate_ner([[], []], [[], []]).f1 == 1.0
    with pytest.raises(DocMismatch):
        evaluate_ner([[]], [[], []])


def synthetic_tweets(n=50, seed=0):
    "tweets with planted vaccine names and their gold spans"
    rng = np.random.default_rng(seed)
    names = ["pfizer", "Moderna", "AstraZeneca", "johnson and johnson", "#pfizer", "novavax"]
    fillers = ["got", "my", "second", "shot", "today", "feeling", "fine", "Berlin", "clinic"]
    texts, gold = [], []
    for _ in range(n):
        words = [fillers[i] for i in rng.integers(len(fillers), size=6)]
        name = names[int(rng.integers(len(names)))]
        words.insert(int(rng.integers(len(words) + 1)), name)
        text = " ".join(words)
        texts.append(text)
        # Moderna is not in the gazetteer, only modern is
        gold.append([] if name == "Moderna" else [span(text, name)])
    return texts, gold


def test_gazetteer_ner_on_synthetic_tweets(gazetteer):
    texts, gold = synthetic_tweets()
    base = StubTagger({"AstraZeneca": "ORG", "pfizer": "ORG", "Berlin": "GPE"})
    predicted = [[s for s in recognize(t, gazetteer, base) if s.label == VAC_TYPE] for t in texts]
    metrics = evaluate_ner(predicted, gold)
    assert metrics.precision == 1.0
    assert metrics.recall == 1.0
    with_base_only = [[EntitySpan(t[a:b], a, b, l) for a, b, l in base.tag(t)] for t in texts]
    assert evaluate_ner(with_base_only, gold).f1 < 1.0


# -----------------------------------------------------------------------------
def test_classify_sentiment_by_formula():
    lexicon = Lexicon({"good": 1.9})
    label = classify_sentiment("good", lexicon)
    assert label.polarity == POSITIVE
    assert label.compound == pytest.approx(1.9 / math.sqrt(1.9 ** 2 + 15), abs=1e-4)


def test_classify_sentiment_neutral():
    lexicon = Lexicon({"good": 1.9})
    assert classify_sentiment("", lexicon) == SentimentLabel(NEUTRAL, 0.0)
    assert classify_sentiment("vaccine rollout tomorrow", lexicon).polarity == NEUTRAL


def test_classify_sentiment_negation():
    lexicon = Lexicon({"good": 1.9})
    assert classify_sentiment("not good", lexicon).polarity == NEGATIVE


def test_default_lexicon():
    lexicon = load_lexicon()
    assert len(lexicon) > 20
    assert classify_sentiment("the vaccine is safe", lexicon).polarity == POSITIVE
    assert classify_sentiment("the vaccine is poison", lexicon).polarity == NEGATIVE


@pytest.mark.parametrize(
    "compound, polarity",
    [(1.0, POSITIVE), (0.05, POSITIVE), (0.0499, NEUTRAL), (0.0, NEUTRAL), (-0.0499, NEUTRAL), (-0.05, NEGATIVE), (-1.0, NEGATIVE)],
)
def test_polarity_thresholds(compound, polarity):
    assert polarity_of(compound) == polarity
    assert SentimentLabel(polarity, compound).polarity == polarity


def test_sentiment_label_validation():
    with pytest.raises(ValueError):
        SentimentLabel(POSITIVE, -0.3)


def test_lexicon_validation(tmp_path):
    with pytest.raises(ValueError):
        Lexicon({"awful": -5.0})
    fname = tmp_path / "lex.tsv"
    fname.write_text("# header\nmeh\tnot-a-number\n", encoding="utf-8")
    with pytest.raises(MalformedEntry):
        load_lexicon(fname)
    fname.write_text("# header\nSuper\t2.0\n", encoding="utf-8")
    assert classify_sentiment("super", load_lexicon(fname)).polarity == POSITIVE


def test_public_names():
    import rebut.annotate as annotate

    assert all(hasattr(annotate, name) for name in annotate.__all__)
    for name in ("recognize", "load_gazetteer", "classify_sentiment", "EntitySpan"):
        assert name in annotate.__all__
