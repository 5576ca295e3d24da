"""Load pipeline artifacts and answer rebuttal queries for new texts"""
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from rebut._provider.base import BaseTagger, SentencePairScorer
from rebut._provider.mock import NullTagger
from rebut._provider.pipe import SubprocessScorer
from rebut._provider.spacytagger import SpacyTagger
from rebut._provider.transformer import TransformerScorer
from rebut.annotate import (
    Gazetteer,
    Lexicon,
    classify_sentiment,
    load_gazetteer,
    load_lexicon,
    recognize,
)
from rebut.config import PipelineConfig
from rebut.corpus import FactArticle, Tweet, load_articles, load_tweets
from rebut.install import VECTORPATH
from rebut.manifest import StageDir, StaleUpstream, read_json, read_jsonl
from rebut.mapping import MappingResult, load_mappings
from rebut.rebuttal import (
    AnnotatedTweet,
    recommend_counter_tweets,
    tiered_recommend,
)
from rebut.similarity import WordVectorScorer, load_word_vectors
from rebut.textprep import load_stopwords, prepare
from rebut.topics import (
    UNKNOWN,
    CooccurrenceGraph,
    TopicAssignment,
    TopicLabelTable,
    TopicModel,
    assign,
    default_tau,
    load_labels,
    synonym_backfill,
)

log = logging.getLogger(__name__)

INGEST, FIT_TOPICS, MAP_TOPICS, ANNOTATE = "ingest", "fit-topics", "map-topics", "annotate"


class ArtifactsMissing(FileNotFoundError):
    pass


def taus(config: PipelineConfig, K: int) -> Tuple[float, float]:
    "the assignment thresholds, 1.5/K unless configured"
    t = config.thresholds
    if t.tau_primary is None or t.tau_secondary is None:
        return default_tau(K), default_tau(K)
    return t.tau_primary, t.tau_secondary


def make_scorer(config: PipelineConfig, stopwords: FrozenSet[str]) -> SentencePairScorer:
    "the configured sentence-pair scorer, not yet connected"
    r = config.recommend
    if r.scorer == "transformer":
        return TransformerScorer(r.scorer_model)
    if r.scorer == "subprocess":
        return SubprocessScorer(r.scorer_command)
    vectors = config.resolve(config.paths.vectors) or VECTORPATH
    return WordVectorScorer(load_word_vectors(vectors), stopwords)


def make_tagger(config: PipelineConfig) -> BaseTagger:
    if config.recommend.base_tagger == "spacy":
        return SpacyTagger()
    return NullTagger()


# -----------------------------------------------------------------------------
def load_corpus(out: Path) -> Tuple[List[Tweet], List[FactArticle]]:
    stage = StageDir(out, INGEST)
    return load_tweets(stage.path("tweets.jsonl")), load_articles(stage.path("articles.jsonl"))


@dataclass
class TopicArtifacts:
    tweet_model: TopicModel
    article_model: TopicModel
    tweet_labels: TopicLabelTable
    article_labels: TopicLabelTable
    tweet_assignments: List[TopicAssignment]
    article_assignments: List[TopicAssignment]
    cooccurrence: CooccurrenceGraph


def load_topics(out: Path) -> TopicArtifacts:
    stage = StageDir(out, FIT_TOPICS)
    return TopicArtifacts(
        tweet_model=TopicModel.from_dict(read_json(stage.path("tweet_model.json"))),
        article_model=TopicModel.from_dict(read_json(stage.path("article_model.json"))),
        tweet_labels=load_labels(stage.path("tweet_labels.json")),
        article_labels=load_labels(stage.path("article_labels.json")),
        tweet_assignments=[
            TopicAssignment.from_dict(d) for d in read_jsonl(stage.path("tweet_assignments.jsonl"))
        ],
        article_assignments=[
            TopicAssignment.from_dict(d)
            for d in read_jsonl(stage.path("article_assignments.jsonl"))
        ],
        cooccurrence=CooccurrenceGraph.from_dict(read_json(stage.path("cooccurrence.json"))),
    )


def load_mapping_table(out: Path) -> List[MappingResult]:
    return load_mappings(StageDir(out, MAP_TOPICS).path("mappings.json"))


def load_annotations(out: Path, tweets: List[Tweet]) -> List[AnnotatedTweet]:
    by_id = {t.id: t for t in tweets}
    rows = read_jsonl(StageDir(out, ANNOTATE).path("annotations.jsonl"))
    return [AnnotatedTweet.from_dict(by_id[row["id"]], row) for row in rows]


# -----------------------------------------------------------------------------
class Engine:
    """everything needed to rebut a new text

    .. code-block:: python

       with Engine.load(config) as engine:
           engine.recommend("the vaccine contains aborted fetal cells", "fc")

    """

    def __init__(
        self,
        config: PipelineConfig,
        scorer: SentencePairScorer,
        articles: List[FactArticle],
        topics: TopicArtifacts,
        mappings: List[MappingResult],
        annotated: List[AnnotatedTweet],
        hashes: Dict[str, str],
        tagger: Optional[BaseTagger] = None,
    ):
        self.config = config
        self.scorer = scorer
        self.articles = {a.id: a for a in articles}
        self.topics = topics
        self.mappings = mappings
        self.pool = [t for t in annotated if not t.tweet.misleading]
        self.hashes = hashes
        self.tagger = tagger or NullTagger()
        self.stopwords = load_stopwords(config.resolve(config.paths.stopwords))
        self.gazetteer: Gazetteer = load_gazetteer(config.resolve(config.paths.gazetteer))
        self.lexicon: Lexicon = load_lexicon(config.resolve(config.paths.lexicon))

    @classmethod
    def load(cls, config: PipelineConfig, scorer: Optional[SentencePairScorer] = None) -> "Engine":
        """load the artifacts of a finished pipeline run

        raises
        ------
        ArtifactsMissing
            if a stage has not run or its outputs changed
        """
        out = config.out_dir
        hashes = {}
        for stage in (INGEST, FIT_TOPICS, MAP_TOPICS, ANNOTATE):
            try:
                manifest = StageDir(out, stage).verify()
            except StaleUpstream as e:
                raise ArtifactsMissing(str(e))
            for name, digest in manifest.outputs.items():
                hashes[f"{stage}/{name}"] = digest
        tweets, articles = load_corpus(out)
        if scorer is None:
            scorer = make_scorer(config, load_stopwords(config.resolve(config.paths.stopwords)))
        return cls(
            config,
            scorer,
            articles,
            load_topics(out),
            load_mapping_table(out),
            load_annotations(out, tweets),
            hashes,
            make_tagger(config),
        )

    def connect(self):
        self.scorer.connect()
        self.tagger.connect()

    def disconnect(self):
        self.tagger.disconnect()
        self.scorer.disconnect()

    def __enter__(self):
        self.connect()
        return self

    def __exit__(self, type, value, tb):
        self.disconnect()

    def annotate(self, text: str, tweet_id: str = "query") -> AnnotatedTweet:
        "assign topics, entities and sentiment to a new misleading text"
        t = self.topics
        doc = prepare(text, self.stopwords, self.config.stem)
        tau_p, tau_s = taus(self.config, t.tweet_model.K)
        assignment = replace(assign(t.tweet_model, t.tweet_labels, tau_p, tau_s, doc), doc_id=tweet_id)
        if assignment.primary == UNKNOWN and t.tweet_labels.synonyms:
            (filled,) = synonym_backfill(
                [(tweet_id, doc)], t.tweet_labels, self.stopwords, self.config.stem
            )
            if filled.primary != UNKNOWN:
                assignment = filled
        return AnnotatedTweet(
            Tweet(tweet_id, text, misleading=True),
            assignment,
            tuple(recognize(text, self.gazetteer, self.tagger)),
            classify_sentiment(text, self.lexicon),
        )

    def recommend(self, text: str, approach: str = "fc", k: Optional[int] = None) -> Dict[str, Any]:
        """rebut a text with counter tweets (``sm``) or articles (``fc``)

        returns
        -------
        recommendation: Dict[str, Any]
            with target_id, approach, tier, relaxed and the ranked items
        """
        mis = self.annotate(text)
        r = self.config.recommend
        if approach == "sm":
            rec = recommend_counter_tweets(
                mis, self.pool, self.scorer, k or r.k_counter_tweets, r.strict, r.relaxed
            )
            out = rec.to_dict()
        elif approach == "fc":
            fc = tiered_recommend(
                mis,
                self.articles,
                self.topics.article_assignments,
                self.mappings,
                self.topics.cooccurrence,
                self.scorer,
                self.config.thresholds.specific_threshold,
                k or r.k_articles,
            )
            out = fc.to_dict()
        else:
            raise ValueError(f"Unknown approach {approach}")
        out["topic"] = mis.topic
        return out
