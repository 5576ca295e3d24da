from rebut.textprep import TokenStream, load_stopwords, prepare
from rebut.topics import (
    UNKNOWN,
    CooccurrenceGraph,
    EmptyVocabulary,
    InvalidK,
    TopicAssignment,
    TopicLabelTable,
    TopicModel,
    assign,
    assign_all,
    backfill,
    build_cooccurrence_graph,
    coherence,
    default_tau,
    extract_subtopics,
    fit_lda,
    infer_theta,
    load_labels,
    select_k,
    synonym_backfill,
    top_words,
    topic_distribution,
)
from collections import Counter
import json
import math
import numpy as np
import pytest
import time


def planted(n_docs=100, K=3, V=20, length=30, seed=1, prefix="w"):
    "documents drawn from K disjoint vocabularies, and the true topic of each"
    rng = np.random.default_rng(seed)
    vocabs = [[f"{prefix}{k}x{i}" for i in range(V)] for k in range(K)]
    docs, truth = [], []
    for d in range(n_docs):
        k = d % K
        words = [vocabs[k][i] for i in rng.integers(V, size=length)]
        docs.append(TokenStream(tuple(words), f"d{d:03d}"))
        truth.append(k)
    return docs, truth


def purity(labels, truth):
    clusters = {}
    for label, k in zip(labels, truth):
        clusters.setdefault(label, Counter())[k] += 1
    return sum(c.most_common(1)[0][1] for c in clusters.values()) / len(truth)


def model_with_theta(theta, labels=None):
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    K = theta.shape[1]
    return TopicModel(
        K=K,
        phi=np.full((K, 2), 0.5),
        theta=theta,
        vocab=("a", "b"),
        alpha=0.1,
        beta=0.01,
        seed=0,
        doc_ids=tuple(f"d{i}" for i in range(theta.shape[0])),
    )


@pytest.fixture(scope="module")
def small():
    docs, truth = planted(n_docs=30, length=15)
    return docs, fit_lda(docs, 3, alpha=0.1, iterations=30, seed=3)


def test_fit_is_stochastic_matrix(small):
    _, model = small
    assert model.phi.shape == (3, len(model.vocab))
    assert np.allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
    assert np.allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
    assert list(model.vocab) == sorted(model.vocab)
    assert model.coherence <= 0


def test_fit_is_deterministic(small):
    docs, model = small
    again = fit_lda(docs, 3, alpha=0.1, iterations=30, seed=3)
    assert np.array_equal(model.theta, again.theta)
    assert np.array_equal(model.phi, again.phi)


def test_model_to_dict(small):
    _, model = small
    loaded = TopicModel.from_dict(json.loads(json.dumps(model.to_dict())))
    assert np.array_equal(loaded.phi, model.phi)
    assert loaded.doc_ids == model.doc_ids
    assert loaded.coherence == model.coherence


@pytest.mark.slow
def test_planted_topics_are_recovered():
    docs, truth = planted()
    model = fit_lda(docs, 3, alpha=0.1, iterations=150, seed=42)
    labels = np.argmax(model.theta, axis=1)
    assert purity(labels, truth) >= 0.9


@pytest.mark.slow
def test_select_k_finds_planted_k():
    docs, _ = planted()
    K, model = select_k(docs, (2, 5), alpha=0.1, iterations=60, seed=42)
    assert K == 3
    assert model.K == 3


@pytest.mark.slow
def test_select_k_with_default_prior():
    docs, truth = planted()
    K, model = select_k(docs, (2, 6), iterations=200, seed=42)
    assert K == 3
    assert model.alpha == pytest.approx(50 / 3)
    assert purity(np.argmax(model.theta, axis=1), truth) == 1.0


@pytest.mark.slow
def test_coherence_prefers_the_planted_k():
    docs, _ = planted()
    planted_k = fit_lda(docs, 3, iterations=200, seed=42)
    too_many = fit_lda(docs, 10, iterations=200, seed=42)
    assert planted_k.coherence > too_many.coherence


@pytest.mark.slow
def test_full_fit_is_fast_enough():
    docs, _ = planted()
    start = time.perf_counter()
    fit_lda(docs, 3, iterations=1000, seed=42)
    assert time.perf_counter() - start < 30.0


def test_invalid_fits():
    docs = [TokenStream(("a", "b"), "d1")]
    with pytest.raises(InvalidK):
        fit_lda(docs, 1)
    with pytest.raises(EmptyVocabulary):
        fit_lda([TokenStream((), "d1"), TokenStream((), "d2")], 2)
    with pytest.raises(ValueError):
        fit_lda(docs, 2, iterations=0)
    with pytest.raises(ValueError):
        select_k(docs, [])


def test_top_words():
    model = TopicModel(
        K=1, phi=np.array([[0.2, 0.5, 0.3]]), theta=np.ones((1, 1)),
        vocab=("a", "b", "c"), alpha=0.1, beta=0.01, seed=0,
    )
    assert [w for w, _ in top_words(model, 0, 2)] == ["b", "c"]


def test_coherence_by_hand():
    model = TopicModel(
        K=1, phi=np.array([[0.5, 0.3, 0.2]]), theta=np.ones((4, 1)),
        vocab=("a", "b", "c"), alpha=0.1, beta=0.01, seed=0,
    )
    docs = [
        TokenStream(("a", "b")),
        TokenStream(("a",)),
        TokenStream(("b", "c")),
        TokenStream(("a", "b", "c", "a")),
    ]
    # D(a)=3 and D(a, b)=2
    assert coherence(model, docs, top_m=2) == pytest.approx(math.log(3 / 4))


def test_coherence_of_always_cooccurring_words():
    model = TopicModel(
        K=1, phi=np.array([[0.6, 0.4]]), theta=np.ones((3, 1)),
        vocab=("a", "b"), alpha=0.1, beta=0.01, seed=0,
    )
    docs = [TokenStream(("a", "b"))] * 3
    assert coherence(model, docs, top_m=2) == 0.0
    with pytest.raises(ValueError):
        coherence(model, docs, top_m=1)


def test_assign():
    model = model_with_theta([0.7, 0.2, 0.1])
    labels = TopicLabelTable.default(3)
    a = assign(model, labels, 0.25, 0.15, TokenStream(("a",), "d0"))
    assert (a.primary, a.secondary) == ("Topic 0", "Topic 1")
    assert a.primary_prob == pytest.approx(0.7)
    assert a.pair == frozenset(("Topic 0", "Topic 1"))


def test_assign_below_thresholds():
    labels = TopicLabelTable.default(3)
    uniform = assign(model_with_theta([1 / 3] * 3), labels, 0.4, 0.2, TokenStream(("a",), "d0"))
    assert uniform.primary == UNKNOWN and uniform.secondary == UNKNOWN
    weak = assign(model_with_theta([0.8, 0.1, 0.1]), labels, 0.4, 0.2, TokenStream(("a",), "d0"))
    assert weak.primary == "Topic 0" and weak.secondary == UNKNOWN
    assert weak.pair is None


def test_assign_rejects_bad_thresholds():
    with pytest.raises(ValueError):
        assign(model_with_theta([0.5, 0.5]), TopicLabelTable.default(2), 0.2, 0.4, TokenStream(()))


def test_assign_all_defaults_to_one_and_a_half_over_k():
    model = model_with_theta([[0.6, 0.3, 0.1], [0.4, 0.35, 0.25]])
    docs = [TokenStream(("a",), "d0"), TokenStream(("a",), "d1")]
    a, b = assign_all(model, TopicLabelTable.default(3, "FC topic"), docs)
    assert default_tau(3) == pytest.approx(0.5)
    assert a.primary == "FC topic 0" and a.secondary == UNKNOWN
    assert b.primary == UNKNOWN


def test_default_tau_stays_below_one():
    assert default_tau(1) == 0.99


def test_infer_theta():
    docs, _ = planted(n_docs=30, length=15)
    model = fit_lda(docs, 3, alpha=0.1, iterations=30, seed=3)
    unknown = infer_theta(model, TokenStream(("nothing", "known")))
    assert np.allclose(unknown, 1 / 3)
    theta = infer_theta(model, TokenStream(("w0x1", "w0x2", "w0x3", "w0x4") * 3))
    assert theta.sum() == pytest.approx(1.0)
    assert theta.max() > 0.8
    assert np.array_equal(theta, infer_theta(model, TokenStream(("w0x1", "w0x2", "w0x3", "w0x4") * 3)))


def test_assignment_invariants():
    with pytest.raises(ValueError):
        TopicAssignment("d", "A", "B", 0.2, 0.3)
    with pytest.raises(ValueError):
        TopicAssignment("d", UNKNOWN, "B")
    a = TopicAssignment("d", "A", "B", 0.6, 0.3)
    assert TopicAssignment.from_dict(a.to_dict()) == a


def test_label_table():
    with pytest.raises(ValueError):
        TopicLabelTable({0: "A", 1: "A"})
    with pytest.raises(ValueError):
        TopicLabelTable({0: UNKNOWN})
    with pytest.raises(ValueError):
        TopicLabelTable({0: "A"}, synonyms={"B": ["b"]})
    table = TopicLabelTable({1: "B", 0: "A"})
    assert table.ordered() == ["A", "B"]
    assert table.index("B") == 1
    with pytest.raises(ValueError):
        table.check(3)


def test_load_labels(tmp_path):
    fname = tmp_path / "labels.json"
    fname.write_text(
        json.dumps(
            {
                "labels": {"0": "Choices", "1": "Shots"},
                "synonyms": {"Shots": ["jab", "dose"]},
                "subtopics": {"Shots": ["Booster doses"]},
            }
        ),
        encoding="utf-8",
    )
    table = load_labels(fname, 2)
    assert table.label(1) == "Shots"
    assert table.synonyms["Shots"] == ["jab", "dose"]
    with pytest.raises(ValueError):
        load_labels(fname, 3)


@pytest.fixture
def synonym_labels():
    return TopicLabelTable(
        {0: "Shots", 1: "Choices"}, synonyms={"Shots": ["jab", "dose"], "Choices": ["refuse"]}
    )


def test_synonym_backfill(synonym_labels):
    stops = load_stopwords()
    docs = [
        ("t1", prepare("got the jab today", stops)),
        ("t2", prepare("got the jab but I refuse a second", stops)),
        ("t3", prepare("nothing to see here", stops)),
    ]
    t1, t2, t3 = synonym_backfill(docs, synonym_labels, stops)
    assert t1.primary == "Shots" and t1.method == "synonym"
    assert t2.primary == UNKNOWN
    assert t3.primary == UNKNOWN


def test_backfill_only_touches_unknown(synonym_labels):
    stops = load_stopwords()
    docs = [prepare("the jab", stops, source_id="t1"), prepare("the jab", stops, source_id="t2")]
    assignments = [TopicAssignment("t1"), TopicAssignment("t2", "Choices", primary_prob=0.9)]
    filled = backfill(assignments, docs, synonym_labels, stops)
    assert filled[0].primary == "Shots"
    assert filled[1] == assignments[1]


def test_extract_subtopics_needs_enough_documents():
    docs, _ = planted(n_docs=10, K=1)
    model = model_with_theta(np.ones((10, 1)))
    assignments = [TopicAssignment(d.source_id, "T", primary_prob=1.0) for d in docs]
    assert extract_subtopics(model, docs, assignments, "T", min_docs=30) == []


@pytest.mark.slow
def test_extract_subtopics_recovers_a_split():
    x, _ = planted(n_docs=20, K=1, V=10, length=20, seed=4, prefix="x")
    y, _ = planted(n_docs=20, K=1, V=10, length=20, seed=5, prefix="y")
    docs = [TokenStream(d.tokens, f"x{i}") for i, d in enumerate(x)]
    docs += [TokenStream(d.tokens, f"y{i}") for i, d in enumerate(y)]
    model = fit_lda(docs, 2, alpha=0.1, iterations=5, seed=1)
    assignments = [TopicAssignment(d.source_id, "T", primary_prob=1.0) for d in docs]
    labels = TopicLabelTable({0: "T", 1: "U"}, subtopics={"T": ["Curated"]})
    subtopics = extract_subtopics(
        model, docs, assignments, "T", labels, max_sub=2, min_docs=30,
        alpha=0.1, iterations=60, top_m=8,
    )
    assert len(subtopics) == 2
    assert subtopics[0] == "Curated"
    words = subtopics[1].split("/")
    assert len(words) == 3
    assert len({w[0] for w in words}) == 1


def test_cooccurrence_graph():
    assignments = [
        TopicAssignment("1", "A", "B", 0.5, 0.4),
        TopicAssignment("2", "B", "A", 0.5, 0.4),
        TopicAssignment("3", "A", "C", 0.5, 0.4),
        TopicAssignment("4", "D", UNKNOWN, 0.9, 0.0),
    ]
    graph = build_cooccurrence_graph(assignments)
    assert graph.edges == {frozenset("AB"): 2, frozenset("AC"): 1}
    assert graph.nodes == {"A": 2, "B": 1, "C": 1, "D": 0}
    assert graph.weighted_degree("A") == 3
    assert graph.strongest_neighbor("A") == "B"
    assert graph.strongest_neighbor("D") is None
    assert graph.total_weight == 3
    assert CooccurrenceGraph.from_dict(graph.to_dict()) == graph


def test_cooccurrence_graph_without_secondaries():
    graph = build_cooccurrence_graph([TopicAssignment("1", "A", primary_prob=0.9)])
    assert graph.nodes == {"A": 0}
    assert graph.edges == {}


def test_topic_distribution():
    dist = topic_distribution(
        [
            TopicAssignment("1", "A", "B", 0.5, 0.4),
            TopicAssignment("2", "A", UNKNOWN, 0.9, 0.0),
            TopicAssignment("3", "B", "A", 0.5, 0.4),
        ]
    )
    assert dist["primary"] == {"A": 2, "B": 1}
    assert dist["secondary"] == {"A": 1, "B": 1, UNKNOWN: 1}
