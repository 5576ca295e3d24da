"""Topic-topic mapping between the misleading-tweet topics and the fact-check
topics

Three ways to map are implemented:

* :func:`map_by_distance` embeds the topics of both models into a shared
  plane (principal coordinates of their Jensen-Shannon distances) and maps
  every tweet topic to the nearest fact-check topic.
* :func:`map_by_keywords` counts exactly matching keywords of the two topics.
* :func:`map_by_tfidf` compares keyword bags by cosine similarity. It is kept
  for diagnostics, it scores low whenever only few keywords match.

:func:`rank_k_quality` rates a keyword mapping by how high the matched words
rank within the target topic.
"""
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist, squareform
from scipy.special import rel_entr
from sklearn.feature_extraction.text import TfidfVectorizer
from sklearn.metrics.pairwise import cosine_similarity

from rebut.corpus import FactArticle
from rebut.similarity import DimensionMismatch
from rebut.textprep import TokenStream, normalize
from rebut.topics import (
    TOP_M,
    TopicAssignment,
    TopicLabelTable,
    TopicModel,
    UNKNOWN,
    top_words,
)

log = logging.getLogger(__name__)

FileName = Union[Path, str]
METHODS = ("distance", "naive", "tfidf")
SMOOTHING = 1e-12
#: share of a topic's probability its keyword signature needs to cover
SIGNATURE_MASS = 0.95


class NotADistribution(ValueError):
    pass


class DegenerateMatrix(ValueError):
    "all topics are identical, there is nothing to project"


class NoMatchedKeywords(ValueError):
    pass


@dataclass(frozen=True)
class TopicSignature:
    """the top keywords of a topic, descending weight"""

    topic_label: str
    keywords: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("A signature needs at least one keyword")
        weights = [w for _, w in self.keywords]
        if any(a < b for a, b in zip(weights, weights[1:])):
            raise ValueError("Keyword weights must be descending")

    @property
    def words(self) -> List[str]:
        return [w for w, _ in self.keywords]

    def weight(self, word: str) -> float:
        return dict(self.keywords).get(word, 0.0)

    def rank(self, word: str) -> int:
        "1-based position of a word"
        return self.words.index(word) + 1


@dataclass(frozen=True)
class MappingResult:
    """a tweet topic mapped to a fact-check topic, or to None

    For ``distance`` a smaller score is better, for ``naive`` and ``tfidf``
    a larger one. ``frequency`` is the summed weight of the matched keywords
    (naive only).
    """

    source_topic: str
    target_topic: Optional[str]
    method: str
    score: float
    matched_keywords: Tuple[str, ...] = ()
    frequency: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"Unknown method {self.method}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source_topic": self.source_topic,
            "target_topic": self.target_topic,
            "method": self.method,
            "score": self.score,
            "matched_keywords": list(self.matched_keywords),
            "frequency": self.frequency,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "MappingResult":
        return cls(
            source_topic=d["source_topic"],
            target_topic=d["target_topic"],
            method=d["method"],
            score=float(d["score"]),
            matched_keywords=tuple(d.get("matched_keywords", ())),
            frequency=float(d.get("frequency", 0.0)),
        )


@dataclass(frozen=True, eq=False)
class TopicProjection:
    "2-D principal coordinates per topic"
    labels: Tuple[str, ...]
    coords: np.ndarray

    def distance(self, a: int, b: int) -> float:
        return float(np.linalg.norm(self.coords[a] - self.coords[b]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "topics": [
                {"label": l, "x": float(x), "y": float(y)}
                for l, (x, y) in zip(self.labels, self.coords)
            ]
        }


def mapped_target(mappings: Iterable[MappingResult], topic: str) -> Optional[str]:
    "the fact-check topic a tweet topic maps to"
    for m in mappings:
        if m.source_topic == topic:
            return m.target_topic
    return None


def dump_mappings(mappings: Iterable[MappingResult], filename: FileName):
    fname = Path(str(filename)).expanduser()
    fname.parent.mkdir(parents=True, exist_ok=True)
    with fname.open("w", encoding="utf-8") as f:
        json.dump([m.to_dict() for m in mappings], f, indent=2, sort_keys=True)


def load_mappings(filename: FileName) -> List[MappingResult]:
    with Path(str(filename)).expanduser().open(encoding="utf-8") as f:
        return [MappingResult.from_dict(d) for d in json.load(f)]


# -----------------------------------------------------------------------------
def _check_distribution(p: np.ndarray, name: str):
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise NotADistribution(f"{name} has negative or non-finite entries")
    if abs(p.sum() - 1.0) > 1e-9:
        raise NotADistribution(f"{name} sums to {p.sum()}, not 1")


def js_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """Jensen-Shannon divergence with base-2 logarithms

    Symmetric and bounded by [0, 1].

    raises
    ------
    DimensionMismatch, NotADistribution
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionMismatch(f"Shapes {p.shape} and {q.shape} differ")
    _check_distribution(p, "p")
    _check_distribution(q, "q")
    m = 0.5 * (p + q)
    kl = rel_entr(p, m).sum() + rel_entr(q, m).sum()
    return float(min(max(0.5 * kl / math.log(2), 0.0), 1.0))


def _js_matrix(rows: Sequence[np.ndarray]) -> np.ndarray:
    return squareform(pdist(np.asarray(rows), metric=js_divergence))


def merge_topic_rows(
    *models: TopicModel, smoothing: float = SMOOTHING
) -> Tuple[Tuple[str, ...], np.ndarray]:
    """stack the phi rows of several models over their merged vocabulary

    Words absent in a model get probability 0, then every row is smoothed and
    renormalized.
    """
    vocab = tuple(sorted(set().union(*(m.vocab for m in models))))
    index = {w: i for i, w in enumerate(vocab)}
    blocks = []
    for model in models:
        block = np.zeros((model.K, len(vocab)))
        cols = [index[w] for w in model.vocab]
        block[:, cols] = model.phi
        blocks.append(block)
    rows = np.vstack(blocks) + smoothing
    return vocab, rows / rows.sum(axis=1, keepdims=True)


def project_topics(
    topic_word_rows: Sequence[Sequence[float]], labels: Optional[Sequence[str]] = None
) -> TopicProjection:
    """principal coordinates of the Jensen-Shannon distances between topics

    Classical multidimensional scaling: double-center the squared distance
    matrix and keep the two leading eigenvectors, scaled by the root of their
    eigenvalues. Signs are fixed so that each axis' largest component is
    positive.

    raises
    ------
    DegenerateMatrix
        if all topics are identical
    """
    rows = [np.asarray(r, dtype=np.float64) for r in topic_word_rows]
    n = len(rows)
    if n < 2:
        raise ValueError("Need at least two topics to project")
    D = _js_matrix(rows)
    if np.all(D <= 1e-15):
        raise DegenerateMatrix("All topics are identical")
    return _pcoa(D, tuple(labels) if labels is not None else tuple(map(str, range(n))))


def _pcoa(D: np.ndarray, labels: Tuple[str, ...]) -> TopicProjection:
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (D ** 2) @ J
    vals, vecs = np.linalg.eigh(B)
    order = np.argsort(-vals, kind="stable")[:2]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    for j in range(vecs.shape[1]):
        pivot = np.argmax(np.abs(vecs[:, j]))
        if vecs[pivot, j] < 0:
            vecs[:, j] = -vecs[:, j]
    coords = vecs * np.sqrt(vals)
    if coords.shape[1] < 2:
        coords = np.hstack([coords, np.zeros((n, 2 - coords.shape[1]))])
    return TopicProjection(labels, coords)


def joint_projection(
    mis_model: TopicModel,
    fc_model: TopicModel,
    labels: Tuple[TopicLabelTable, TopicLabelTable],
) -> Tuple[TopicProjection, np.ndarray]:
    """embed the topics of both models into one plane

    returns
    -------
    projection, js: Tuple[TopicProjection, np.ndarray]
        tweet topics come first, then fact-check topics; js holds the full
        pairwise divergence matrix in the same order
    """
    mis_labels, fc_labels = labels
    _, rows = merge_topic_rows(mis_model, fc_model)
    names = [mis_labels.label(k) for k in range(mis_model.K)]
    names += [fc_labels.label(k) for k in range(fc_model.K)]
    D = _js_matrix(list(rows))
    if np.all(D <= 1e-15):
        raise DegenerateMatrix("All topics are identical")
    return _pcoa(D, tuple(names)), D


def map_by_distance(
    mis_model: TopicModel,
    fc_model: TopicModel,
    labels: Tuple[TopicLabelTable, TopicLabelTable],
    cutoff: Optional[float] = None,
    max_divergence: float = 0.95,
) -> List[MappingResult]:
    """map every tweet topic to the nearest fact-check topic in the joint plane

    Several tweet topics may map to the same fact-check topic. A tweet topic
    stays unmapped when its nearest neighbor is farther than ``cutoff``
    (default: mean plus one standard deviation of all pairwise distances in
    the plane), or when the pair's Jensen-Shannon divergence exceeds
    ``max_divergence``: far apart topics can land close to each other once
    projected to two coordinates.
    """
    projection, js = joint_projection(mis_model, fc_model, labels)
    n_mis = mis_model.K
    pairwise = pdist(projection.coords)
    if cutoff is None:
        cutoff = float(pairwise.mean() + pairwise.std())
    out = []
    for i in range(n_mis):
        dists = [projection.distance(i, n_mis + j) for j in range(fc_model.K)]
        j = int(np.argmin(dists))
        target: Optional[str] = projection.labels[n_mis + j]
        if dists[j] > cutoff:
            log.info("%s: nearest topic beyond cutoff", projection.labels[i])
            target = None
        elif js[i, n_mis + j] > max_divergence:
            log.info("%s: nearest topic diverges too much", projection.labels[i])
            target = None
        out.append(MappingResult(projection.labels[i], target, "distance", dists[j]))
    return out


# -----------------------------------------------------------------------------
def signatures(
    model: TopicModel,
    labels: TopicLabelTable,
    m: int = TOP_M,
    stopwords: Iterable[str] = frozenset(),
    stem: bool = True,
    mass: float = SIGNATURE_MASS,
) -> List[TopicSignature]:
    """the top m keywords of every topic, normalized

    Keywords collapsing to the same normal form add up their weights. A
    signature stops early once its keywords cover ``mass`` of the topic's
    probability, so a peaked topic is not padded with near-zero words.

    raises
    ------
    ValueError
        if mass is not within (0, 1]
    """
    if not 0.0 < mass <= 1.0:
        raise ValueError(f"The keyword mass must be within (0, 1], not {mass}")
    stops = frozenset(stopwords)
    out = []
    for k in range(model.K):
        merged: Dict[str, float] = {}
        covered = 0.0
        for word, weight in top_words(model, k, m):
            for token in normalize(TokenStream((word,)), stops, stem).tokens:
                merged[token] = merged.get(token, 0.0) + weight
            covered += weight
            if covered >= mass:
                break
        ranked = sorted(merged.items(), key=lambda kv: -kv[1])
        out.append(TopicSignature(labels.label(k), tuple(ranked)))
    return out


def map_by_keywords(
    mis_sigs: Sequence[TopicSignature], fc_sigs: Sequence[TopicSignature]
) -> List[MappingResult]:
    """map topics by exactly matching keywords

    Every fact-check topic is scored by the number of matched keywords, then
    by their summed weight in both signatures; the best one wins, earlier
    topics win ties. Without any match a topic stays unmapped.
    """
    out = []
    for sig in mis_sigs:
        mine = set(sig.words)
        best: Optional[Tuple[int, float, TopicSignature, List[str]]] = None
        for cand in fc_sigs:
            matched = [w for w in cand.words if w in mine]
            freq = sum(sig.weight(w) + cand.weight(w) for w in matched)
            if best is None or (len(matched), freq) > (best[0], best[1]):
                best = (len(matched), freq, cand, matched)
        if best is None or best[0] == 0:
            out.append(MappingResult(sig.topic_label, None, "naive", 0.0))
            continue
        count, freq, cand, matched = best
        out.append(
            MappingResult(
                sig.topic_label, cand.topic_label, "naive", float(count), tuple(matched), freq
            )
        )
    return out


def _keywords(doc: List[str]) -> List[str]:
    return doc


def map_by_tfidf(
    mis_sigs: Sequence[TopicSignature],
    fc_sigs: Sequence[TopicSignature],
    weighted: bool = True,
) -> List[MappingResult]:
    """map topics by cosine similarity of their keyword bags

    With ``weighted`` the bags are TF-IDF weighted over all signatures of
    both models, otherwise binary.
    """
    docs = [s.words for s in mis_sigs] + [s.words for s in fc_sigs]
    vectorizer = TfidfVectorizer(
        analyzer=_keywords, lowercase=False, use_idf=weighted, binary=not weighted
    )
    X = vectorizer.fit_transform(docs)
    sims = cosine_similarity(X[: len(mis_sigs)], X[len(mis_sigs) :])
    out = []
    for i, sig in enumerate(mis_sigs):
        j = int(np.argmax(sims[i]))
        score = float(sims[i, j])
        target = fc_sigs[j].topic_label if score > 0 else None
        matched = tuple(w for w in fc_sigs[j].words if w in set(sig.words)) if target else ()
        out.append(MappingResult(sig.topic_label, target, "tfidf", score, matched))
    return out


def rank_k_quality(
    mappings: Sequence[MappingResult], sigs: Sequence[TopicSignature]
) -> float:
    """average rank of the matched keywords within their target topic

    Per mapping the ranks of its matched words are averaged, then the
    per-mapping means are averaged. 1.0 means every match was the target's
    top keyword.

    raises
    ------
    NoMatchedKeywords
        if no mapping carries matched keywords
    """
    by_label = {s.topic_label: s for s in sigs}
    means = []
    for m in mappings:
        if m.target_topic is None or not m.matched_keywords:
            continue
        target = by_label[m.target_topic]
        ranks = [target.rank(w) for w in m.matched_keywords]
        means.append(sum(ranks) / len(ranks))
    if not means:
        raise NoMatchedKeywords("None of the mappings matched a keyword")
    return sum(means) / len(means)


def agreement(a: Sequence[MappingResult], b: Sequence[MappingResult]) -> bool:
    "whether two mapping sets map every topic to the same target"
    return {(m.source_topic, m.target_topic) for m in a} == {
        (m.source_topic, m.target_topic) for m in b
    }


# -----------------------------------------------------------------------------
@dataclass
class UnmappedTopicReport:
    "fact-check articles that mention an unmapped tweet topic"
    topic: str
    terms: Tuple[str, ...]
    articles: List[Tuple[str, str, str]] = field(default_factory=list)

    @property
    def most_common_primary(self) -> Optional[str]:
        counts = Counter(p for _, p, _ in self.articles if p != UNKNOWN)
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[0][0] if ranked else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "topic": self.topic,
            "terms": list(self.terms),
            "articles": [
                {"id": a, "primary": p, "secondary": s} for a, p, s in self.articles
            ],
            "most_common_primary": self.most_common_primary,
        }


def unmapped_topic_report(
    topic: str,
    terms: Sequence[str],
    articles: Sequence[FactArticle],
    article_docs: Sequence[TokenStream],
    assignments: Sequence[TopicAssignment],
) -> UnmappedTopicReport:
    """list the articles whose normalized text contains all given terms,
    together with their top two topics

    ``terms`` must be normalized the way ``article_docs`` are.
    """
    tokens = {doc.source_id: set(doc.tokens) for doc in article_docs}
    by_id = {a.doc_id: a for a in assignments}
    report = UnmappedTopicReport(topic, tuple(terms))
    for article in articles:
        if terms and set(terms) <= tokens.get(article.id, set()):
            a = by_id.get(article.id)
            primary = a.primary if a else UNKNOWN
            secondary = a.secondary if a else UNKNOWN
            report.articles.append((article.id, primary, secondary))
    return report
