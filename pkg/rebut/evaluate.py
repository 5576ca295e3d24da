"""Offline evaluation of both approaches with P@k, MAP@k and MRR@k

Relevance is judged by rule instead of by hand: a recommended tweet is
relevant if it meets the strict match criteria, a recommended article if it
belongs to the mapped topic and scores at or above the threshold. Rankings
are computed over the whole candidate pool, without criteria filtering.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from rebut._provider.base import SentencePairScorer
from rebut.corpus import FactArticle
from rebut.mapping import MappingResult, mapped_target
from rebut.rebuttal import (
    SPECIFIC_THRESHOLD,
    AnnotatedTweet,
    MatchCriteria,
    criteria_match,
    rank,
)
from rebut.topics import TopicAssignment

log = logging.getLogger(__name__)

KS = (3, 5, 10, 15, 20)
APPROACHES = ("sm", "fc")
#: report names of the approaches
APPROACH_NAMES = {"sm": "REBUT_SM", "fc": "REBUT_FC"}
RelevanceVector = Sequence[bool]


class KOutOfRange(ValueError):
    pass


class EmptyQuerySet(ValueError):
    pass


def precision_at_k(rel: RelevanceVector, k: int) -> float:
    """the fraction of relevant items among the first k

    raises
    ------
    KOutOfRange
        unless 1 ≤ k ≤ len(rel)
    """
    if not 1 <= k <= len(rel):
        raise KOutOfRange(f"k={k} outside [1, {len(rel)}]")
    return sum(bool(r) for r in rel[:k]) / k


def _cut(rel: RelevanceVector, k: int) -> List[bool]:
    "truncate to k, missing positions are not relevant"
    out = [bool(r) for r in rel[:k]]
    return out + [False] * (k - len(out))


def average_precision(rel: RelevanceVector, k: int, conventional: bool = False) -> float:
    """mean of P@i·rel(i) over all k positions

    With ``conventional`` the sum is divided by the number of relevant items
    within k instead of by k.
    """
    if k < 1:
        raise KOutOfRange(f"k={k} must be positive")
    r = _cut(rel, k)
    hits = 0
    total = 0.0
    for i, relevant in enumerate(r, start=1):
        if relevant:
            hits += 1
            total += hits / i
    if conventional:
        return total / hits if hits else 0.0
    return total / k


def reciprocal_rank(rel: RelevanceVector, k: int) -> float:
    "1/rank of the first relevant item within k, 0 if there is none"
    if k < 1:
        raise KOutOfRange(f"k={k} must be positive")
    for i, relevant in enumerate(_cut(rel, k), start=1):
        if relevant:
            return 1.0 / i
    return 0.0


def map_at_k(rels: Sequence[RelevanceVector], k: int, conventional: bool = False) -> float:
    """mean average precision at k over all queries

    raises
    ------
    EmptyQuerySet
    """
    if not rels:
        raise EmptyQuerySet("MAP is undefined without queries")
    return sum(average_precision(r, k, conventional) for r in rels) / len(rels)


def mrr_at_k(rels: Sequence[RelevanceVector], k: int) -> float:
    """mean reciprocal rank at k, queries without a relevant item count 0

    raises
    ------
    EmptyQuerySet
    """
    if not rels:
        raise EmptyQuerySet("MRR is undefined without queries")
    return sum(reciprocal_rank(r, k) for r in rels) / len(rels)


# -----------------------------------------------------------------------------
def judge_sm(
    mis: AnnotatedTweet, recommended: Sequence[AnnotatedTweet], strict: Optional[MatchCriteria] = None
) -> List[bool]:
    "a recommended tweet is relevant if it meets the strict criteria"
    strict = strict or MatchCriteria.strict()
    return [criteria_match(mis, cand, strict) for cand in recommended]


def judge_fc(
    mis: AnnotatedTweet,
    recommended: Sequence[Tuple[str, float]],
    article_assignments: Mapping[str, TopicAssignment],
    mappings: Sequence[MappingResult],
    threshold: float = SPECIFIC_THRESHOLD,
) -> List[bool]:
    """a recommended article is relevant if its primary topic is the mapped
    topic of the tweet and its score reaches the threshold

    args
    ----
    recommended: Sequence[Tuple[str, float]]
        ranked (article id, score) pairs
    article_assignments: Mapping[str, TopicAssignment]
        article id to its topics
    """
    target = mapped_target(mappings, mis.topic)
    out = []
    for article_id, score in recommended:
        a = article_assignments.get(article_id)
        out.append(
            target is not None and a is not None and a.primary == target and score >= threshold
        )
    return out


@dataclass
class EvalReport:
    approach: str
    n_queries: int = 0
    metrics: Dict[str, float] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return APPROACH_NAMES.get(self.approach, self.approach)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "approach": self.approach,
            "name": self.name,
            "n_queries": self.n_queries,
            "metrics": self.metrics,
        }


def _metrics(rels: Sequence[RelevanceVector], ks: Sequence[int], conventional: bool) -> Dict[str, float]:
    out = {f"MRR@{k}": mrr_at_k(rels, k) for k in ks}
    out.update({f"MAP@{k}": map_at_k(rels, k, conventional) for k in ks})
    return out


def run_evaluation(
    approach: str,
    queries: Sequence[AnnotatedTweet],
    scorer: SentencePairScorer,
    pool: Sequence[AnnotatedTweet] = (),
    articles: Optional[Mapping[str, FactArticle]] = None,
    article_assignments: Sequence[TopicAssignment] = (),
    mappings: Sequence[MappingResult] = (),
    strict: Optional[MatchCriteria] = None,
    threshold: float = SPECIFIC_THRESHOLD,
    ks: Sequence[int] = KS,
    conventional: bool = False,
) -> EvalReport:
    """rank the whole candidate pool for every query, judge, and aggregate

    args
    ----
    approach: str
        ``sm`` ranks the non-misleading tweets of ``pool``, ``fc`` the
        ``articles`` by title
    ks: Sequence[int] = (3, 5, 10, 15, 20)
        the cutoffs

    raises
    ------
    EmptyQuerySet
    """
    if approach not in APPROACHES:
        raise ValueError(f"Unknown approach {approach}, choose from {APPROACHES}")
    depth = max(ks)
    rels: List[List[bool]] = []
    if approach == "sm":
        by_id = {c.id: c for c in pool}
        for mis in queries:
            candidates = [(c.id, c.text) for c in pool if not c.tweet.misleading and c.id != mis.id]
            ranked = rank(mis.text, candidates, scorer)[:depth]
            rels.append(judge_sm(mis, [by_id[i] for i, _ in ranked], strict))
    else:
        articles = articles or {}
        assigned = {a.doc_id: a for a in article_assignments}
        titles = [(i, a.title) for i, a in sorted(articles.items())]
        for mis in queries:
            ranked = rank(mis.text, titles, scorer)[:depth]
            rels.append(judge_fc(mis, ranked, assigned, mappings, threshold))
    log.info("Judged %d %s queries", len(rels), approach)
    return EvalReport(approach, len(rels), _metrics(rels, ks, conventional))


def render_table(reports: Sequence[EvalReport]) -> str:
    "an aligned text table, one row per approach"
    if not reports:
        return ""
    columns = list(reports[0].metrics)
    width = max(len(c) for c in columns + ["approach"] + [r.name for r in reports])
    lines = ["  ".join(c.rjust(width) for c in ["approach"] + columns)]
    for r in reports:
        cells = [r.name.rjust(width)] + [f"{r.metrics[c]:.3f}".rjust(width) for c in columns]
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"
