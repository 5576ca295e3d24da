"""The two recommendation approaches

* :func:`recommend_counter_tweets` answers a misleading tweet with the most
  similar non-misleading tweets that agree on topic, entities and sentiment,
  relaxing the criteria when nothing qualifies.
* :func:`tiered_recommend` answers it with fact-checked articles of the
  mapped topic. Results are tiered: Specific at or above the similarity
  threshold, Near below it, Broad when the topic had to be borrowed from the
  co-occurrence graph.
"""
import logging
from dataclasses import dataclass, field
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from rebut._provider.base import SentencePairScorer
from rebut.annotate import EntitySpan, SentimentLabel
from rebut.corpus import FactArticle, Tweet
from rebut.mapping import MappingResult, mapped_target
from rebut.similarity import pair_score
from rebut.topics import UNKNOWN, CooccurrenceGraph, TopicAssignment

log = logging.getLogger(__name__)

SPECIFIC, NEAR, BROAD = "Specific", "Near", "Broad"
SPECIFIC_THRESHOLD = 0.62
K_COUNTER_TWEETS = 10
K_ARTICLES = 15
STRATEGIES = ("random", "max_engagement", "min_engagement")


class MissingAnnotation(ValueError):
    def __init__(self, tweet_id: str, what: str):
        super().__init__(f"Tweet {tweet_id!r} has no {what}")
        self.tweet_id = tweet_id


class NoTopicAssignment(LookupError):
    def __init__(self, tweet_id: str):
        super().__init__(f"Tweet {tweet_id!r} has no topic assignment")
        self.tweet_id = tweet_id


class EmptyTopic(LookupError):
    def __init__(self, topic: str):
        super().__init__(f"Topic {topic!r} has no misleading tweet")
        self.topic = topic


@dataclass(frozen=True)
class MatchCriteria:
    require_topic: bool = True
    min_shared_entities: int = 1
    require_sentiment: bool = True

    def __post_init__(self):
        if self.min_shared_entities < 0:
            raise ValueError("min_shared_entities must not be negative")

    @classmethod
    def strict(cls) -> "MatchCriteria":
        return cls(True, 1, True)

    @classmethod
    def relaxed(cls) -> "MatchCriteria":
        return cls(False, 2, False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "require_topic": self.require_topic,
            "min_shared_entities": self.min_shared_entities,
            "require_sentiment": self.require_sentiment,
        }


@dataclass(frozen=True)
class AnnotatedTweet:
    """a tweet with everything the criteria compare"""

    tweet: Tweet
    assignment: Optional[TopicAssignment] = None
    entities: Optional[Tuple[EntitySpan, ...]] = None
    sentiment: Optional[SentimentLabel] = None

    @property
    def id(self) -> str:
        return self.tweet.id

    @property
    def text(self) -> str:
        return self.tweet.text

    @property
    def topic(self) -> str:
        if self.assignment is None:
            raise NoTopicAssignment(self.tweet.id)
        return self.assignment.primary

    def surfaces(self) -> set:
        if self.entities is None:
            raise MissingAnnotation(self.tweet.id, "entities")
        return {e.surface.casefold() for e in self.entities}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.tweet.id,
            "assignment": self.assignment.to_dict() if self.assignment else None,
            "entities": [e.to_dict() for e in self.entities] if self.entities is not None else None,
            "sentiment": (
                {"polarity": self.sentiment.polarity, "compound": self.sentiment.compound}
                if self.sentiment
                else None
            ),
        }

    @classmethod
    def from_dict(cls, tweet: Tweet, d: Mapping[str, Any]) -> "AnnotatedTweet":
        sentiment = d.get("sentiment")
        entities = d.get("entities")
        return cls(
            tweet,
            TopicAssignment.from_dict(d["assignment"]) if d.get("assignment") else None,
            tuple(EntitySpan.from_dict(e) for e in entities) if entities is not None else None,
            SentimentLabel(sentiment["polarity"], sentiment["compound"]) if sentiment else None,
        )


def _check(t: AnnotatedTweet):
    if t.assignment is None:
        raise MissingAnnotation(t.id, "topic assignment")
    if t.entities is None:
        raise MissingAnnotation(t.id, "entities")
    if t.sentiment is None:
        raise MissingAnnotation(t.id, "sentiment")


def criteria_match(mis: AnnotatedTweet, cand: AnnotatedTweet, c: MatchCriteria) -> bool:
    """whether a candidate agrees with a misleading tweet

    Topics agree if both primary topics are equal and known, entities by
    their case-folded surfaces, sentiment by polarity.

    raises
    ------
    MissingAnnotation
    """
    _check(mis)
    _check(cand)
    assert mis.assignment and cand.assignment and mis.sentiment and cand.sentiment
    if c.require_topic:
        if mis.assignment.primary == UNKNOWN or mis.assignment.primary != cand.assignment.primary:
            return False
    if len(mis.surfaces() & cand.surfaces()) < c.min_shared_entities:
        return False
    if c.require_sentiment and mis.sentiment.polarity != cand.sentiment.polarity:
        return False
    return True


def rank(
    query: str, candidates: Iterable[Tuple[str, str]], scorer: SentencePairScorer
) -> List[Tuple[str, float]]:
    """score (id, text) candidates against a query text

    returns
    -------
    items: List[Tuple[str, float]]
        sorted by score descending, then id ascending
    """
    scored = [(cid, pair_score(scorer, query, text).score) for cid, text in candidates]
    return sorted(scored, key=lambda item: (-item[1], item[0]))


@dataclass
class CounterTweetRecommendation:
    target_id: str
    items: List[Tuple[str, float]] = field(default_factory=list)
    relaxed: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_id": self.target_id,
            "approach": "sm",
            "tier": None,
            "relaxed": self.relaxed,
            "items": [{"id": i, "score": s} for i, s in self.items],
        }


def recommend_counter_tweets(
    mis: AnnotatedTweet,
    pool: Sequence[AnnotatedTweet],
    scorer: SentencePairScorer,
    K: int = K_COUNTER_TWEETS,
    strict: Optional[MatchCriteria] = None,
    relaxed: Optional[MatchCriteria] = None,
) -> CounterTweetRecommendation:
    """the top K non-misleading tweets passing the criteria, most similar first

    Candidates are filtered by the strict criteria. If none survive, a
    candidate passing either the strict or the relaxed criteria qualifies
    and ``relaxed`` is set. Misleading tweets and the query tweet itself are
    never recommended.
    """
    if K < 1:
        raise ValueError("K must be positive")
    strict = strict or MatchCriteria.strict()
    relaxed_c = relaxed or MatchCriteria.relaxed()
    eligible = [c for c in pool if not c.tweet.misleading and c.id != mis.id]
    survivors = [c for c in eligible if criteria_match(mis, c, strict)]
    was_relaxed = False
    if not survivors:
        was_relaxed = True
        survivors = [c for c in eligible if criteria_match(mis, c, relaxed_c)]
        log.debug("%s: relaxed criteria, %d candidates", mis.id, len(survivors))
    items = rank(mis.text, ((c.id, c.text) for c in survivors), scorer)[:K]
    return CounterTweetRecommendation(mis.id, items, was_relaxed)


# -----------------------------------------------------------------------------
def filter_articles(
    tweet_topic: str,
    mappings: Sequence[MappingResult],
    article_assignments: Sequence[TopicAssignment],
) -> List[str]:
    "ids of the articles whose primary topic is the one tweet_topic maps to"
    target = mapped_target(mappings, tweet_topic)
    if target is None:
        return []
    return [a.doc_id for a in article_assignments if a.primary == target]


@dataclass
class ArticleRecommendation:
    target_id: str
    items: List[Tuple[str, float]] = field(default_factory=list)
    tier: Optional[str] = None
    used_topic: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_id": self.target_id,
            "approach": "fc",
            "tier": self.tier,
            "relaxed": False,
            "used_topic": self.used_topic,
            "items": [{"id": i, "score": s} for i, s in self.items],
        }


def fallback_topic(
    tweet_topic: str, mappings: Sequence[MappingResult], cooccurrence: CooccurrenceGraph
) -> Optional[str]:
    """the fact-check topic borrowed for the Broad tier

    A mapped topic borrows the strongest co-occurring topic of its target.
    An unmapped topic borrows the topic that co-occurs most strongly with any
    mapped target; ties go to the higher weighted degree, then the label.
    """
    target = mapped_target(mappings, tweet_topic)
    if target is not None:
        return cooccurrence.strongest_neighbor(target)
    targets = {m.target_topic for m in mappings if m.target_topic is not None}
    candidates = [
        (-weight, -cooccurrence.weighted_degree(other), other)
        for t in targets
        for other, weight in cooccurrence.neighbors(t).items()
    ]
    return min(candidates)[2] if candidates else None


def _score_topic(
    mis: AnnotatedTweet,
    topic: str,
    articles: Mapping[str, FactArticle],
    article_assignments: Sequence[TopicAssignment],
    scorer: SentencePairScorer,
    K: int,
) -> List[Tuple[str, float]]:
    ids = [a.doc_id for a in article_assignments if a.primary == topic and a.doc_id in articles]
    return rank(mis.text, ((i, articles[i].title) for i in ids), scorer)[:K]


def tiered_recommend(
    mis: AnnotatedTweet,
    articles: Mapping[str, FactArticle],
    article_assignments: Sequence[TopicAssignment],
    mappings: Sequence[MappingResult],
    cooccurrence: CooccurrenceGraph,
    scorer: SentencePairScorer,
    specific_threshold: float = SPECIFIC_THRESHOLD,
    K: int = K_ARTICLES,
) -> ArticleRecommendation:
    """recommend fact-checked articles for a misleading tweet

    Articles of the mapped topic are scored by the similarity of the tweet
    to their title. If that leaves no candidate, the topic is borrowed from
    the co-occurrence graph, see :func:`fallback_topic`, and the result is
    Broad. Otherwise it is Specific if the best score reaches the threshold
    and Near if not.

    args
    ----
    articles: Mapping[str, FactArticle]
        article id to article
    specific_threshold: float = 0.62
        calibrated for the transformer scorer, recalibrate for others

    raises
    ------
    NoTopicAssignment
    """
    if mis.assignment is None:
        raise NoTopicAssignment(mis.id)
    topic = mis.assignment.primary
    target = mapped_target(mappings, topic)
    if target is not None:
        items = _score_topic(mis, target, articles, article_assignments, scorer, K)
        if items:
            tier = SPECIFIC if items[0][1] >= specific_threshold else NEAR
            return ArticleRecommendation(mis.id, items, tier, target)
    borrowed = fallback_topic(topic, mappings, cooccurrence)
    if borrowed is None:
        log.info("%s: no topic to fall back to", mis.id)
        return ArticleRecommendation(mis.id, [], BROAD, None)
    items = _score_topic(mis, borrowed, articles, article_assignments, scorer, K)
    return ArticleRecommendation(mis.id, items, BROAD, borrowed)


# -----------------------------------------------------------------------------
def pick_target_tweet(
    topic: str,
    tweets: Sequence[AnnotatedTweet],
    seed: int = 0,
    strategy: str = "random",
) -> AnnotatedTweet:
    """pick the misleading tweet of a topic to rebut

    ``random`` draws uniformly with the given seed, the engagement
    strategies take the tweet with the most or the fewest replies, retweets
    and likes, ties by id.

    raises
    ------
    EmptyTopic
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy}, choose from {STRATEGIES}")
    candidates = sorted(
        (t for t in tweets if t.tweet.misleading and t.assignment and t.topic == topic),
        key=lambda t: t.id,
    )
    if not candidates:
        raise EmptyTopic(topic)
    if strategy == "max_engagement":
        return min(candidates, key=lambda t: (-t.tweet.engagement, t.id))
    if strategy == "min_engagement":
        return min(candidates, key=lambda t: (t.tweet.engagement, t.id))
    rng = np.random.default_rng(seed)
    return candidates[int(rng.integers(len(candidates)))]


def compare_fields(
    tweets: Sequence[AnnotatedTweet],
    articles: Sequence[FactArticle],
    scorer: SentencePairScorer,
) -> Dict[str, float]:
    """mean best score when matching tweets against article titles and
    against article contents

    Articles without content are left out of the content side.
    """
    out = {}
    for name in ("title", "content"):
        best = []
        texts = [(a.id, getattr(a, name)) for a in articles if getattr(a, name)]
        for t in tweets:
            ranked = rank(t.text, texts, scorer)
            if ranked:
                best.append(ranked[0][1])
        out[name] = float(np.mean(best)) if best else 0.0
    return out


def score_range(
    recommendations: Iterable[ArticleRecommendation],
) -> Optional[Tuple[float, float]]:
    "the lowest and highest top score of a run, None if nothing was recommended"
    tops = [r.items[0][1] for r in recommendations if r.items]
    if not tops:
        return None
    return min(tops), max(tops)
