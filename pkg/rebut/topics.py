"""LDA topic modeling of both corpora

The model is fitted with collapsed Gibbs sampling and is deterministic under a
fixed seed. On top of the fitted model this module assigns the top two topics
to every document (with an Unknown bucket), backfills unlabeled documents via
topic synonyms, extracts sub-topics with a nested fit and builds the
co-occurrence graph of the top two topics.

.. code-block:: python

   from rebut.textprep import prepare
   from rebut.topics import select_k, assign, TopicLabelTable

   docs = [prepare(t.text, source_id=t.id) for t in tweets]
   K, model = select_k(docs, (2, 12), iterations=500, seed=42)
   labels = TopicLabelTable.default(K)
   tau = default_tau(K)
   assignments = [assign(model, labels, tau, tau, doc) for doc in docs]

"""
import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from scipy import sparse

from rebut.textprep import TokenStream, prepare

log = logging.getLogger(__name__)

FileName = Union[Path, str]
UNKNOWN = "Unknown"

#: top words per topic used for coherence and keyword signatures
TOP_M = 15


class EmptyVocabulary(ValueError):
    "all documents are empty after normalization"


class InvalidK(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TopicModel:
    """a fitted LDA model

    args
    ----
    K: int
        the number of topics
    phi: np.ndarray
        K×V topic-word distribution, rows sum to one
    theta: np.ndarray
        N×K document-topic distribution, rows sum to one
    vocab: Tuple[str, ...]
        the V words, sorted
    alpha: float
        document-topic prior
    beta: float
        topic-word prior
    seed: int
        the seed the sampler ran with
    coherence: float
        UMass coherence over the fitted documents
    doc_ids: Tuple[str, ...]
        the source ids of the N fitted documents, in row order
    iterations: int
        number of Gibbs sweeps
    """

    K: int
    phi: np.ndarray
    theta: np.ndarray
    vocab: Tuple[str, ...]
    alpha: float
    beta: float
    seed: int
    coherence: float = float("nan")
    doc_ids: Tuple[str, ...] = ()
    iterations: int = 0

    @cached_property
    def word_index(self) -> Dict[str, int]:
        return {w: i for i, w in enumerate(self.vocab)}

    @cached_property
    def doc_index(self) -> Dict[str, int]:
        return {d: i for i, d in enumerate(self.doc_ids)}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "iterations": self.iterations,
            "coherence": self.coherence,
            "vocab": list(self.vocab),
            "doc_ids": list(self.doc_ids),
            "phi": self.phi.tolist(),
            "theta": self.theta.tolist(),
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "TopicModel":
        K = int(d["K"])
        return cls(
            K=K,
            phi=np.asarray(d["phi"], dtype=np.float64).reshape(K, len(d["vocab"])),
            theta=np.asarray(d["theta"], dtype=np.float64).reshape(-1, K),
            vocab=tuple(d["vocab"]),
            alpha=float(d["alpha"]),
            beta=float(d["beta"]),
            seed=int(d["seed"]),
            coherence=float(d["coherence"]),
            doc_ids=tuple(d["doc_ids"]),
            iterations=int(d["iterations"]),
        )


@dataclass(frozen=True)
class TopicAssignment:
    """the top two topics of a document

    ``method`` records whether the labels came from the model (``lda``) or
    from synonym backfill (``synonym``).
    """

    doc_id: str
    primary: str = UNKNOWN
    secondary: str = UNKNOWN
    primary_prob: float = 0.0
    secondary_prob: float = 0.0
    method: str = "lda"

    def __post_init__(self):
        if self.secondary_prob > self.primary_prob:
            raise ValueError("secondary_prob must not exceed primary_prob")
        if self.primary == UNKNOWN and self.secondary != UNKNOWN:
            raise ValueError("An Unknown primary topic implies an Unknown secondary")

    @property
    def pair(self) -> Optional[FrozenSet[str]]:
        "the unordered (primary, secondary) pair if both are known"
        if UNKNOWN in (self.primary, self.secondary):
            return None
        if self.primary == self.secondary:
            return None
        return frozenset((self.primary, self.secondary))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "primary": self.primary,
            "secondary": self.secondary,
            "primary_prob": self.primary_prob,
            "secondary_prob": self.secondary_prob,
            "method": self.method,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "TopicAssignment":
        return cls(**d)


@dataclass
class TopicLabelTable:
    """human curated labels for topic indices, plus synonyms per label

    The engine never invents label strings: unlabeled tables fall back to
    ``Topic <index>`` via :meth:`default`.

    args
    ----
    labels: Dict[int, str]
        topic index to label
    synonyms: Dict[str, List[str]]
        label to synonym words used by :func:`synonym_backfill`
    subtopics: Dict[str, List[str]]
        label to curated sub-topic labels, used by :func:`extract_subtopics`
    """

    labels: Dict[int, str]
    synonyms: Dict[str, List[str]] = field(default_factory=dict)
    subtopics: Dict[str, List[str]] = field(default_factory=dict)

    def __post_init__(self):
        values = list(self.labels.values())
        if len(set(values)) != len(values):
            raise ValueError("Topic labels must be unique")
        if UNKNOWN in values:
            raise ValueError(f"{UNKNOWN!r} is reserved")
        for label in self.synonyms:
            if label not in values:
                raise ValueError(f"Synonyms given for unknown label {label!r}")

    @classmethod
    def default(cls, K: int, prefix: str = "Topic") -> "TopicLabelTable":
        return cls({k: f"{prefix} {k}" for k in range(K)})

    def check(self, K: int) -> "TopicLabelTable":
        "raise a ValueError unless every index 0..K-1 is labeled"
        missing = [k for k in range(K) if k not in self.labels]
        if missing:
            raise ValueError(f"Topics {missing} have no label")
        return self

    def label(self, index: int) -> str:
        return self.labels[index]

    def index(self, label: str) -> int:
        for k, v in self.labels.items():
            if v == label:
                return k
        raise KeyError(label)

    def ordered(self) -> List[str]:
        "labels sorted by topic index"
        return [self.labels[k] for k in sorted(self.labels)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "labels": {str(k): v for k, v in sorted(self.labels.items())},
            "synonyms": self.synonyms,
            "subtopics": self.subtopics,
        }


def load_labels(filename: FileName, K: Optional[int] = None) -> TopicLabelTable:
    """load a label table

    The file is JSON::

        {"labels": {"0": "Choices", "1": "Shots"},
         "synonyms": {"Shots": ["jab", "dose"]},
         "subtopics": {"Shots": ["Booster doses"]}}

    """
    with Path(str(filename)).expanduser().open(encoding="utf-8") as f:
        raw = json.load(f)
    table = TopicLabelTable(
        labels={int(k): str(v) for k, v in raw.get("labels", {}).items()},
        synonyms={k: list(v) for k, v in raw.get("synonyms", {}).items()},
        subtopics={k: list(v) for k, v in raw.get("subtopics", {}).items()},
    )
    if K is not None:
        table.check(K)
    return table


# -----------------------------------------------------------------------------
def _encode(docs: Sequence[TokenStream]) -> Tuple[Tuple[str, ...], List[List[int]]]:
    vocab = tuple(sorted({t for doc in docs for t in doc.tokens}))
    index = {w: i for i, w in enumerate(vocab)}
    return vocab, [[index[t] for t in doc.tokens] for doc in docs]


def _normalize_rows(m: np.ndarray) -> np.ndarray:
    return m / m.sum(axis=1, keepdims=True)


def _gibbs(
    encoded: List[List[int]],
    V: int,
    K: int,
    alpha: float,
    beta: float,
    iterations: int,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """run collapsed gibbs sampling, returns word-topic, doc-topic and topic counts

    The tokens of one document are drawn together, each from the counts
    without its own assignment. Documents are visited in order and update
    the shared counts before the next one is drawn.
    """
    N = len(encoded)
    docs = [np.asarray(doc, dtype=np.intp) for doc in encoded]
    bounds = np.cumsum([0] + [len(ws) for ws in docs])
    n = int(bounds[-1])
    z = np.split(rng.integers(K, size=n), bounds[1:-1])
    nwk = np.zeros((V, K))
    ndk = np.zeros((N, K))
    for d, (ws, zs) in enumerate(zip(docs, z)):
        np.add.at(nwk, (ws, zs), 1)
        ndk[d] = np.bincount(zs, minlength=K)
    nk = nwk.sum(axis=0)
    eye = np.eye(K)
    vbeta = V * beta
    last = K - 1
    for sweep in range(iterations):
        u = rng.random(n)
        for d, ws in enumerate(docs):
            if not len(ws):
                continue
            zs = z[d]
            own = eye[zs]
            p = (nwk[ws] - own + beta) * (ndk[d] - own + alpha) / (nk - own + vbeta)
            cp = np.cumsum(p, axis=1)
            r = u[bounds[d] : bounds[d + 1]] * cp[:, -1]
            new = np.minimum((cp <= r[:, None]).sum(axis=1), last)
            np.subtract.at(nwk, (ws, zs), 1)
            np.add.at(nwk, (ws, new), 1)
            counts = np.bincount(new, minlength=K)
            nk += counts - ndk[d]
            ndk[d] = counts
            z[d] = new
        if log.isEnabledFor(logging.DEBUG) and (sweep + 1) % 100 == 0:
            log.debug("K=%d: finished sweep %d/%d", K, sweep + 1, iterations)
    return nwk, ndk, nk


def _fit(
    docs: Sequence[TokenStream],
    K: int,
    alpha: Optional[float],
    beta: float,
    iterations: int,
    seed: int,
    top_m: int,
) -> TopicModel:
    if K < 1:
        raise InvalidK(f"K must be positive, not {K}")
    if iterations < 1:
        raise ValueError("Minimum number of iterations is 1")
    if not docs:
        raise ValueError("Cannot fit a topic model without documents")
    vocab, encoded = _encode(docs)
    if not vocab:
        raise EmptyVocabulary("All documents are empty after normalization")
    alpha = 50.0 / K if alpha is None else float(alpha)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    V = len(vocab)
    rng = np.random.default_rng(seed)
    nwk, ndk, nk = _gibbs(encoded, V, K, alpha, beta, iterations, rng)
    phi = _normalize_rows((nwk.T + beta) / (nk[:, None] + V * beta))
    theta = _normalize_rows(ndk + alpha)
    model = TopicModel(
        K=K,
        phi=phi,
        theta=theta,
        vocab=vocab,
        alpha=alpha,
        beta=float(beta),
        seed=seed,
        doc_ids=tuple(doc.source_id for doc in docs),
        iterations=iterations,
    )
    score = coherence(model, docs, min(top_m, V)) if V >= 2 else 0.0
    object.__setattr__(model, "coherence", score)
    log.debug("Fitted K=%d on %d docs, coherence %.4f", K, len(docs), score)
    return model


def fit_lda(
    docs: Sequence[TokenStream],
    K: int,
    alpha: Optional[float] = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    top_m: int = TOP_M,
) -> TopicModel:
    """fit an LDA model with collapsed Gibbs sampling

    args
    ----
    docs: Sequence[TokenStream]
        normalized documents, see :func:`rebut.textprep.prepare`
    K: int
        number of topics, at least 2
    alpha: Optional[float] = None
        document-topic prior, defaults to 50/K
    beta: float = 0.01
        topic-word prior
    iterations: int = 1000
        number of Gibbs sweeps
    seed: int = 0
        the seed, identical inputs and seed reproduce phi and theta exactly
    top_m: int = 15
        top words per topic for the coherence stored on the model

    raises
    ------
    InvalidK, EmptyVocabulary
    """
    if K < 2:
        raise InvalidK(f"K must be at least 2, not {K}")
    return _fit(docs, K, alpha, beta, iterations, seed, top_m)


def top_words(model: TopicModel, topic: int, m: int = TOP_M) -> List[Tuple[str, float]]:
    "the m most probable words of a topic, descending, ties by vocabulary order"
    order = np.argsort(-model.phi[topic], kind="stable")[:m]
    return [(model.vocab[i], float(model.phi[topic, i])) for i in order]


def _doc_word_matrix(model: TopicModel, docs: Sequence[TokenStream]) -> sparse.csc_matrix:
    index = model.word_index
    rows, cols = [], []
    for d, doc in enumerate(docs):
        for w in {index[t] for t in doc.tokens if t in index}:
            rows.append(d)
            cols.append(w)
    data = np.ones(len(rows), dtype=np.int64)
    return sparse.csc_matrix((data, (rows, cols)), shape=(len(docs), len(model.vocab)))


def coherence(model: TopicModel, docs: Sequence[TokenStream], top_m: int = TOP_M) -> float:
    """UMass coherence averaged over topics

    For the top words w_1..w_M of a topic, sums
    log((D(w_m, w_l) + 1) / (D(w_l) + 1)) over all l < m, where D counts the
    documents containing the word(s). Smoothing both counts keeps every term
    at or below zero; words that always co-occur contribute zero.
    """
    if top_m < 2:
        raise ValueError("top_m must be at least 2")
    X = _doc_word_matrix(model, docs)
    scores = []
    for k in range(model.K):
        top = np.argsort(-model.phi[k], kind="stable")[:top_m]
        sub = X[:, top]
        co = (sub.T @ sub).toarray().astype(np.float64)
        score = 0.0
        for m in range(1, len(top)):
            for l in range(m):
                score += math.log((co[m, l] + 1.0) / (co[l, l] + 1.0))
        scores.append(score)
    return float(np.mean(scores))


def select_k(
    docs: Sequence[TokenStream],
    k_range: Union[Tuple[int, int], Sequence[int], range],
    alpha: Optional[float] = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    top_m: int = TOP_M,
) -> Tuple[int, TopicModel]:
    """fit one model per candidate K and keep the most coherent one

    args
    ----
    k_range: Tuple[int, int] or a sequence of ints
        a (low, high) pair is an inclusive interval
    alpha: Optional[float] = None
        fixed prior, or None for 50/K per candidate

    returns
    -------
    K, model: Tuple[int, TopicModel]
        ties go to the smaller K
    """
    if isinstance(k_range, tuple) and len(k_range) == 2:
        candidates = list(range(k_range[0], k_range[1] + 1))
    else:
        candidates = sorted(k_range)
    if not candidates:
        raise ValueError("k_range must not be empty")
    best: Optional[TopicModel] = None
    for K in candidates:
        model = _fit(docs, K, alpha, beta, iterations, seed, top_m)
        log.info("K=%d coherence=%.4f", K, model.coherence)
        if best is None or model.coherence > best.coherence:
            best = model
    assert best is not None
    return best.K, best


# -----------------------------------------------------------------------------
def infer_theta(
    model: TopicModel, doc: TokenStream, iterations: int = 50, seed: Optional[int] = None
) -> np.ndarray:
    """topic distribution of a document that was not part of the fit

    Folds the document in with Gibbs sampling while phi stays fixed. Tokens
    outside the vocabulary are ignored; a document without any known token
    gets the uniform distribution.
    """
    index = model.word_index
    words = [index[t] for t in doc.tokens if t in index]
    K = model.K
    if not words:
        return np.full(K, 1.0 / K)
    rng = np.random.default_rng(model.seed if seed is None else seed)
    z = rng.integers(K, size=len(words)).tolist()
    ndk = np.bincount(z, minlength=K).astype(np.float64)
    phi = model.phi
    for _ in range(iterations):
        u = rng.random(len(words))
        for i, w in enumerate(words):
            ndk[z[i]] -= 1
            cp = np.cumsum(phi[:, w] * (ndk + model.alpha))
            k = min(int(np.searchsorted(cp, u[i] * cp[-1], side="right")), K - 1)
            z[i] = k
            ndk[k] += 1
    theta = ndk + model.alpha
    return theta / theta.sum()


def theta_of(model: TopicModel, doc: TokenStream) -> np.ndarray:
    "the fitted theta row of a document, or the folded-in one for new documents"
    row = model.doc_index.get(doc.source_id)
    if row is not None and doc.source_id:
        return model.theta[row]
    return infer_theta(model, doc)


def default_tau(K: int) -> float:
    "the default probability threshold for a known topic, 1.5/K"
    return min(1.5 / K, 0.99)


def assign(
    model: TopicModel,
    labels: TopicLabelTable,
    tau_primary: float,
    tau_secondary: float,
    doc: TokenStream,
) -> TopicAssignment:
    """assign the top two topics of a document

    The most probable topic becomes primary if its probability reaches
    tau_primary, the second one becomes secondary if its probability reaches
    tau_secondary; otherwise they are Unknown. Equal probabilities go to the
    lower topic index.
    """
    if not 0 < tau_secondary <= tau_primary < 1:
        raise ValueError("Thresholds must satisfy 0 < tau_secondary <= tau_primary < 1")
    row = theta_of(model, doc)
    order = np.argsort(-row, kind="stable")
    p1 = float(row[order[0]])
    p2 = float(row[order[1]]) if model.K > 1 else 0.0
    if p1 < tau_primary:
        return TopicAssignment(doc.source_id, UNKNOWN, UNKNOWN, p1, p2)
    primary = labels.label(int(order[0]))
    secondary = UNKNOWN
    if model.K > 1 and p2 >= tau_secondary:
        secondary = labels.label(int(order[1]))
    return TopicAssignment(doc.source_id, primary, secondary, p1, p2)


def assign_all(
    model: TopicModel,
    labels: TopicLabelTable,
    docs: Iterable[TokenStream],
    tau_primary: Optional[float] = None,
    tau_secondary: Optional[float] = None,
) -> List[TopicAssignment]:
    "assign every document, thresholds default to :func:`default_tau`"
    tau_p = default_tau(model.K) if tau_primary is None else tau_primary
    tau_s = default_tau(model.K) if tau_secondary is None else tau_secondary
    return [assign(model, labels, tau_p, tau_s, doc) for doc in docs]


def _contains(tokens: Tuple[str, ...], phrase: Tuple[str, ...]) -> bool:
    n = len(phrase)
    return any(tokens[i : i + n] == phrase for i in range(len(tokens) - n + 1))


def synonym_backfill(
    unassigned: Sequence[Tuple[str, TokenStream]],
    labels: TopicLabelTable,
    stopwords: Iterable[str] = frozenset(),
    stem: bool = True,
) -> List[TopicAssignment]:
    """label documents via topic synonyms

    A document whose normalized tokens contain a synonym of exactly one topic
    gets that topic as primary. Documents matching no topic, or several, stay
    Unknown.

    args
    ----
    unassigned: Sequence[Tuple[str, TokenStream]]
        pairs of document id and its normalized tokens
    labels: TopicLabelTable
        with a populated synonym table
    stopwords, stem:
        the normalization the documents went through, applied to synonyms
    """
    stops = frozenset(stopwords)
    phrases: Dict[str, List[Tuple[str, ...]]] = {}
    for label, words in labels.synonyms.items():
        normed = [prepare(w, stops, stem).tokens for w in [label] + list(words)]
        phrases[label] = [p for p in normed if p]
    out = []
    for doc_id, doc in unassigned:
        hits = [
            label
            for label in labels.ordered()
            if any(_contains(doc.tokens, p) for p in phrases.get(label, []))
        ]
        if len(hits) == 1:
            out.append(TopicAssignment(doc_id, hits[0], method="synonym"))
        else:
            if len(hits) > 1:
                log.debug("Document %s matches synonyms of %s", doc_id, hits)
            out.append(TopicAssignment(doc_id))
    return out


def backfill(
    assignments: Sequence[TopicAssignment],
    docs: Sequence[TokenStream],
    labels: TopicLabelTable,
    stopwords: Iterable[str] = frozenset(),
    stem: bool = True,
) -> List[TopicAssignment]:
    "run :func:`synonym_backfill` over the Unknown assignments and merge the result"
    by_id = {doc.source_id: doc for doc in docs}
    unknown = [(a.doc_id, by_id[a.doc_id]) for a in assignments if a.primary == UNKNOWN]
    if not unknown or not labels.synonyms:
        return list(assignments)
    filled = {a.doc_id: a for a in synonym_backfill(unknown, labels, stopwords, stem)}
    out = []
    for a in assignments:
        new = filled.get(a.doc_id)
        out.append(new if new is not None and new.primary != UNKNOWN else a)
    log.info(
        "Synonym backfill labeled %d of %d Unknown documents",
        sum(1 for a in filled.values() if a.primary != UNKNOWN),
        len(unknown),
    )
    return out


def extract_subtopics(
    model: TopicModel,
    docs: Sequence[TokenStream],
    assignments: Sequence[TopicAssignment],
    topic: str,
    labels: Optional[TopicLabelTable] = None,
    max_sub: int = 3,
    min_docs: int = 30,
    alpha: Optional[float] = None,
    iterations: Optional[int] = None,
    seed: Optional[int] = None,
    top_m: int = TOP_M,
) -> List[str]:
    """identify up to max_sub sub-topics of a topic

    Runs :func:`select_k` over 1..max_sub on the documents whose primary
    topic is ``topic``. Sub-topics are ordered by prevalence. Their labels
    come from the label table's curated ``subtopics`` when given, otherwise
    from their three top words.

    returns
    -------
    labels: List[str]
        empty if fewer than min_docs documents carry the topic
    """
    primary = {a.doc_id for a in assignments if a.primary == topic}
    subset = [doc for doc in docs if doc.source_id in primary and len(doc)]
    if len(subset) < min_docs:
        log.debug("Topic %r has %d documents, no sub-topics", topic, len(subset))
        return []
    K, sub = select_k(
        subset,
        (1, max_sub),
        alpha=alpha,
        beta=model.beta,
        iterations=model.iterations if iterations is None else iterations,
        seed=model.seed if seed is None else seed,
        top_m=top_m,
    )
    prevalence = sub.theta.sum(axis=0)
    order = np.argsort(-prevalence, kind="stable")
    curated = labels.subtopics.get(topic, []) if labels is not None else []
    out = []
    for rank, k in enumerate(order):
        if rank < len(curated):
            out.append(curated[rank])
        else:
            out.append("/".join(w for w, _ in top_words(sub, int(k), 3)))
    return out


# -----------------------------------------------------------------------------
@dataclass
class CooccurrenceGraph:
    """topics as nodes, edges weighted by how often two topics are the top two
    topics of the same document"""

    nodes: Dict[str, int] = field(default_factory=dict)
    edges: Dict[FrozenSet[str], int] = field(default_factory=dict)

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(frozenset((a, b)), 0)

    def neighbors(self, label: str) -> Dict[str, int]:
        "adjacent topics and edge weights"
        out = {}
        for pair, w in self.edges.items():
            if label in pair:
                (other,) = pair - {label}
                out[other] = w
        return out

    def weighted_degree(self, label: str) -> int:
        return sum(self.neighbors(label).values())

    def strongest_neighbor(self, label: str) -> Optional[str]:
        "the neighbor with the heaviest edge, ties by label"
        ranked = sorted(self.neighbors(label).items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[0][0] if ranked else None

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def to_dict(self) -> Dict[str, Any]:
        edges = sorted((sorted(p) + [w] for p, w in self.edges.items()))
        return {
            "nodes": [{"label": k, "degree": v} for k, v in sorted(self.nodes.items())],
            "edges": [{"source": a, "target": b, "weight": w} for a, b, w in edges],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "CooccurrenceGraph":
        return cls(
            nodes={n["label"]: int(n["degree"]) for n in d["nodes"]},
            edges={frozenset((e["source"], e["target"])): int(e["weight"]) for e in d["edges"]},
        )


def build_cooccurrence_graph(assignments: Iterable[TopicAssignment]) -> CooccurrenceGraph:
    """count the (primary, secondary) pairs of all assignments

    Every known topic becomes a node; node degree is the number of incident
    edges.
    """
    graph = CooccurrenceGraph()
    for a in assignments:
        for label in (a.primary, a.secondary):
            if label != UNKNOWN:
                graph.nodes.setdefault(label, 0)
        pair = a.pair
        if pair is not None:
            graph.edges[pair] = graph.edges.get(pair, 0) + 1
    for pair in graph.edges:
        for label in pair:
            graph.nodes[label] += 1
    return graph


def topic_distribution(assignments: Iterable[TopicAssignment]) -> Dict[str, Dict[str, int]]:
    "number of documents per topic as primary and as secondary topic"
    dist: Dict[str, Dict[str, int]] = {"primary": {}, "secondary": {}}
    for a in assignments:
        for key, label in (("primary", a.primary), ("secondary", a.secondary)):
            dist[key][label] = dist[key].get(label, 0) + 1
    return {
        k: dict(sorted(v.items(), key=lambda kv: (-kv[1], kv[0]))) for k, v in dist.items()
    }
