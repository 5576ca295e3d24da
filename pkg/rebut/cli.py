"""Command line orchestration of the pipeline

.. code-block:: none

   rebut ingest --config pipeline.yaml
   rebut fit-topics --config pipeline.yaml --seed 42
   rebut map-topics --config pipeline.yaml
   rebut annotate --config pipeline.yaml
   rebut recommend-sm --config pipeline.yaml --k 10
   rebut recommend-fc --config pipeline.yaml --threshold 0.62
   rebut evaluate --config pipeline.yaml
   rebut serve --config pipeline.yaml --address 127.0.0.1:8000

``rebut run`` runs all stages in order. Exit codes: 0 success, 2 invalid
configuration, 3 stale upstream stage, 1 anything else.
"""
import argparse
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from rebut import annotate as ann
from rebut.config import ConfigInvalid, PipelineConfig, digest, load_config
from rebut.corpus import corpus_stats, dump, load_articles, load_tweets
from rebut.engine import (
    ANNOTATE,
    FIT_TOPICS,
    INGEST,
    MAP_TOPICS,
    load_annotations,
    load_corpus,
    load_mapping_table,
    load_topics,
    make_scorer,
    make_tagger,
    taus,
)
from rebut.evaluate import EvalReport, render_table, run_evaluation
from rebut.manifest import (
    StageDir,
    StaleUpstream,
    lock,
    sha256_file,
    upstream_inputs,
    write_json,
    write_jsonl,
)
from rebut.mapping import (
    NoMatchedKeywords,
    agreement,
    dump_mappings,
    joint_projection,
    map_by_distance,
    map_by_keywords,
    map_by_tfidf,
    rank_k_quality,
    signatures,
    unmapped_topic_report,
)
from rebut.rebuttal import (
    AnnotatedTweet,
    compare_fields,
    recommend_counter_tweets,
    score_range,
    tiered_recommend,
)
from rebut.textprep import load_stopwords, prepare
from rebut.topics import (
    TopicLabelTable,
    assign_all,
    backfill,
    build_cooccurrence_graph,
    extract_subtopics,
    load_labels,
    select_k,
    topic_distribution,
)

log = logging.getLogger(__name__)

RECOMMEND_SM, RECOMMEND_FC, EVALUATE = "recommend-sm", "recommend-fc", "evaluate"


def _external(config: PipelineConfig, *names: str) -> Dict[str, str]:
    "hashes of the configured input files, keyed by config field"
    inputs = {}
    for name in names:
        path = config.resolve(getattr(config.paths, name))
        if path is not None:
            inputs[f"paths.{name}"] = sha256_file(path)
    return inputs


def _stage(
    config: PipelineConfig,
    name: str,
    upstream: Sequence[str],
    files: Sequence[str],
    section: Dict,
    build: Callable[[StageDir], List[str]],
) -> StageDir:
    """run a stage unless its manifest is current

    raises
    ------
    StaleUpstream
    """
    out = config.out_dir
    inputs = upstream_inputs(out, *upstream)
    inputs.update(_external(config, *files))
    stage = StageDir(out, name)
    config_hash = digest(section)
    if stage.up_to_date(config_hash, inputs):
        log.info("%s is up to date", name)
        return stage
    outputs = build(stage)
    stage.commit(config_hash, inputs, outputs)
    return stage


def _targets(config: PipelineConfig, annotated: List[AnnotatedTweet]) -> List[AnnotatedTweet]:
    "the misleading tweets to rebut, a seeded sample if limited"
    targets = [t for t in annotated if t.tweet.misleading]
    limit = config.recommend.limit
    if limit is not None and limit < len(targets):
        rng = np.random.default_rng(config.seed)
        picked = sorted(rng.choice(len(targets), size=limit, replace=False).tolist())
        targets = [targets[i] for i in picked]
    return targets


# -----------------------------------------------------------------------------
def cmd_ingest(config: PipelineConfig) -> StageDir:
    "validate both corpora and store them canonically"

    def build(stage: StageDir) -> List[str]:
        tweets = load_tweets(config.resolve(config.paths.tweets))  # type: ignore
        articles = load_articles(config.resolve(config.paths.articles))  # type: ignore
        dump(tweets, stage.path("tweets.jsonl"))
        dump(articles, stage.path("articles.jsonl"))
        write_json(
            stage.path("summary.json"),
            {
                "n_tweets": len(tweets),
                "n_misleading": sum(t.misleading for t in tweets),
                "n_articles": len(articles),
            },
        )
        return ["tweets.jsonl", "articles.jsonl", "summary.json"]

    return _stage(config, INGEST, [], ["tweets", "articles"], {}, build)


def _labels(config: PipelineConfig, field: str, K: int, prefix: str) -> TopicLabelTable:
    path = config.resolve(getattr(config.paths, field))
    if path is None:
        return TopicLabelTable.default(K, prefix)
    try:
        return load_labels(path, K)
    except ValueError as e:
        raise ConfigInvalid(f"paths.{field}: {e}, fix lda.k_range to the labeled K")


def cmd_fit_topics(config: PipelineConfig) -> StageDir:
    "fit both topic models, assign topics and build the co-occurrence graph"
    lda = config.lda

    def build(stage: StageDir) -> List[str]:
        tweets, articles = load_corpus(config.out_dir)
        stops = load_stopwords(config.resolve(config.paths.stopwords))
        docs = [prepare(t.text, stops, config.stem, t.id) for t in tweets]
        mis_docs = [d for t, d in zip(tweets, docs) if t.misleading]
        art_docs = [
            prepare(f"{a.title} {a.content}", stops, config.stem, a.id) for a in articles
        ]
        params = dict(alpha=lda.alpha, beta=lda.beta, iterations=lda.iterations, seed=config.seed, top_m=lda.top_m)
        K, tweet_model = select_k(mis_docs, tuple(lda.k_range), **params)
        K_art, article_model = select_k(art_docs, tuple(lda.article_k_range or lda.k_range), **params)
        log.info("Selected K=%d for tweets and K=%d for articles", K, K_art)
        tweet_labels = _labels(config, "tweet_labels", K, "Topic")
        article_labels = _labels(config, "article_labels", K_art, "FC topic")

        tau_p, tau_s = taus(config, K)
        tweet_assignments = backfill(
            assign_all(tweet_model, tweet_labels, docs, tau_p, tau_s),
            docs, tweet_labels, stops, config.stem,
        )
        tau_p, tau_s = taus(config, K_art)
        article_assignments = backfill(
            assign_all(article_model, article_labels, art_docs, tau_p, tau_s),
            art_docs, article_labels, stops, config.stem,
        )
        mis_ids = {d.source_id for d in mis_docs}
        subtopics = {
            label: extract_subtopics(
                tweet_model,
                mis_docs,
                [a for a in tweet_assignments if a.doc_id in mis_ids],
                label,
                tweet_labels,
                max_sub=lda.max_subtopics,
                min_docs=lda.min_subtopic_docs,
            )
            for label in tweet_labels.ordered()
        }
        stats = corpus_stats(tweets, tweet_assignments, articles).to_dict()
        stats.update(
            {
                "tweet_topics": {"K": K, "coherence": tweet_model.coherence},
                "article_topics": {"K": K_art, "coherence": article_model.coherence},
                "tweet_distribution": topic_distribution(tweet_assignments),
                "article_distribution": topic_distribution(article_assignments),
                "tweet_cooccurrence": build_cooccurrence_graph(tweet_assignments).to_dict(),
                "subtopics": subtopics,
            }
        )
        write_json(stage.path("tweet_model.json"), tweet_model.to_dict())
        write_json(stage.path("article_model.json"), article_model.to_dict())
        write_json(stage.path("tweet_labels.json"), tweet_labels.to_dict())
        write_json(stage.path("article_labels.json"), article_labels.to_dict())
        write_jsonl(stage.path("tweet_assignments.jsonl"), (a.to_dict() for a in tweet_assignments))
        write_jsonl(stage.path("article_assignments.jsonl"), (a.to_dict() for a in article_assignments))
        write_json(stage.path("cooccurrence.json"), build_cooccurrence_graph(article_assignments).to_dict())
        write_json(stage.path("stats.json"), stats)
        return [
            "tweet_model.json",
            "article_model.json",
            "tweet_labels.json",
            "article_labels.json",
            "tweet_assignments.jsonl",
            "article_assignments.jsonl",
            "cooccurrence.json",
            "stats.json",
        ]

    section = config.section("lda", "seed", "stem")
    section["thresholds"] = [config.thresholds.tau_primary, config.thresholds.tau_secondary]
    files = ["stopwords", "tweet_labels", "article_labels"]
    return _stage(config, FIT_TOPICS, [INGEST], files, section, build)


def cmd_map_topics(config: PipelineConfig) -> StageDir:
    "map tweet topics to fact-check topics with all three methods"

    def build(stage: StageDir) -> List[str]:
        out = config.out_dir
        t = load_topics(out)
        tweets, articles = load_corpus(out)
        stops = load_stopwords(config.resolve(config.paths.stopwords))
        labels = (t.tweet_labels, t.article_labels)
        th = config.thresholds
        by_distance = map_by_distance(
            t.tweet_model, t.article_model, labels, th.distance_cutoff, th.max_divergence
        )
        mis_sigs = signatures(t.tweet_model, t.tweet_labels, config.lda.top_m, stops, config.stem)
        fc_sigs = signatures(t.article_model, t.article_labels, config.lda.top_m, stops, config.stem)
        naive = map_by_keywords(mis_sigs, fc_sigs)
        methods = {
            "distance": by_distance,
            "naive": naive,
            "tfidf": map_by_tfidf(mis_sigs, fc_sigs, weighted=True),
        }
        try:
            rank_k: Optional[float] = rank_k_quality(naive, fc_sigs)
        except NoMatchedKeywords:
            rank_k = None
        chosen = methods[config.recommend.mapping_method]
        art_docs = [prepare(f"{a.title} {a.content}", stops, config.stem, a.id) for a in articles]
        sigs = {s.topic_label: s for s in mis_sigs}
        unmapped = [
            unmapped_topic_report(
                m.source_topic, sigs[m.source_topic].words[:2], articles, art_docs, t.article_assignments
            ).to_dict()
            for m in chosen
            if m.target_topic is None
        ]
        projection, _ = joint_projection(t.tweet_model, t.article_model, labels)
        dump_mappings(chosen, stage.path("mappings.json"))
        write_json(
            stage.path("methods.json"),
            {
                "methods": {k: [m.to_dict() for m in v] for k, v in methods.items()},
                "rank_k": rank_k,
                "distance_agrees_with_naive": agreement(by_distance, naive),
            },
        )
        write_json(stage.path("projection.json"), projection.to_dict())
        write_json(stage.path("unmapped.json"), unmapped)
        return ["mappings.json", "methods.json", "projection.json", "unmapped.json"]

    section = config.section("seed", "stem")
    section.update(
        top_m=config.lda.top_m,
        distance_cutoff=config.thresholds.distance_cutoff,
        max_divergence=config.thresholds.max_divergence,
        mapping_method=config.recommend.mapping_method,
    )
    return _stage(config, MAP_TOPICS, [INGEST, FIT_TOPICS], ["stopwords"], section, build)


def cmd_annotate(config: PipelineConfig) -> StageDir:
    "detect entities and sentiment of every tweet"

    def build(stage: StageDir) -> List[str]:
        out = config.out_dir
        tweets, _ = load_corpus(out)
        assignments = {a.doc_id: a for a in load_topics(out).tweet_assignments}
        gazetteer = ann.load_gazetteer(config.resolve(config.paths.gazetteer))
        lexicon = ann.load_lexicon(config.resolve(config.paths.lexicon))
        with make_tagger(config) as base:
            rows = [
                AnnotatedTweet(
                    tweet,
                    assignments.get(tweet.id),
                    tuple(ann.recognize(tweet.text, gazetteer, base)),
                    ann.classify_sentiment(tweet.text, lexicon),
                ).to_dict()
                for tweet in tweets
            ]
            texts = [t.text for t in tweets]
            count, fraction = ann.entity_coverage(texts, gazetteer, base)
            summary = {"with_entities": count, "fraction": fraction}
            if config.recommend.base_tagger != "null":
                summary["relabels"] = ann.relabel_summary(texts, gazetteer, base).to_dict()
        summary["sentiment"] = dict(sorted(Counter(r["sentiment"]["polarity"] for r in rows).items()))
        write_jsonl(stage.path("annotations.jsonl"), rows)
        write_json(stage.path("coverage.json"), summary)
        return ["annotations.jsonl", "coverage.json"]

    section = {"base_tagger": config.recommend.base_tagger}
    files = ["gazetteer", "lexicon"]
    return _stage(config, ANNOTATE, [INGEST, FIT_TOPICS], files, section, build)


def _scorer_files(config: PipelineConfig) -> List[str]:
    return ["vectors", "stopwords"] if config.recommend.scorer == "word-vectors" else []


def _scorer_section(config: PipelineConfig) -> Dict:
    r = config.recommend
    return {"scorer": r.scorer, "model": r.scorer_model, "command": r.scorer_command}


def cmd_recommend_sm(config: PipelineConfig) -> StageDir:
    "recommend counter tweets for every misleading tweet"

    def build(stage: StageDir) -> List[str]:
        out = config.out_dir
        tweets, _ = load_corpus(out)
        annotated = load_annotations(out, tweets)
        pool = [t for t in annotated if not t.tweet.misleading]
        r = config.recommend
        stops = load_stopwords(config.resolve(config.paths.stopwords))
        with make_scorer(config, stops) as scorer:
            recs = [
                recommend_counter_tweets(mis, pool, scorer, r.k_counter_tweets, r.strict, r.relaxed)
                for mis in _targets(config, annotated)
            ]
        write_jsonl(stage.path("recommendations.jsonl"), (rec.to_dict() for rec in recs))
        write_json(
            stage.path("summary.json"),
            {
                "n_targets": len(recs),
                "relaxed": sum(rec.relaxed for rec in recs),
                "empty": sum(not rec.items for rec in recs),
            },
        )
        return ["recommendations.jsonl", "summary.json"]

    section = config.section("seed")
    section.update(_scorer_section(config), recommend=config.section("recommend")["recommend"])
    return _stage(
        config, RECOMMEND_SM, [INGEST, FIT_TOPICS, ANNOTATE], _scorer_files(config), section, build
    )


def cmd_recommend_fc(config: PipelineConfig) -> StageDir:
    "recommend tiered fact-checked articles for every misleading tweet"

    def build(stage: StageDir) -> List[str]:
        out = config.out_dir
        tweets, articles = load_corpus(out)
        annotated = load_annotations(out, tweets)
        t = load_topics(out)
        mappings = load_mapping_table(out)
        by_id = {a.id: a for a in articles}
        stops = load_stopwords(config.resolve(config.paths.stopwords))
        targets = _targets(config, annotated)
        with make_scorer(config, stops) as scorer:
            recs = [
                tiered_recommend(
                    mis,
                    by_id,
                    t.article_assignments,
                    mappings,
                    t.cooccurrence,
                    scorer,
                    config.thresholds.specific_threshold,
                    config.recommend.k_articles,
                )
                for mis in targets
            ]
            fields = compare_fields(targets, articles, scorer)
        span = score_range(recs)
        write_jsonl(stage.path("recommendations.jsonl"), (rec.to_dict() for rec in recs))
        write_json(
            stage.path("summary.json"),
            {
                "n_targets": len(recs),
                "tiers": dict(sorted(Counter(rec.tier for rec in recs).items())),
                "score_range": {"min": span[0], "max": span[1]} if span else None,
                "mean_best_score": fields,
            },
        )
        return ["recommendations.jsonl", "summary.json"]

    section = config.section("seed")
    section.update(
        _scorer_section(config),
        recommend=config.section("recommend")["recommend"],
        specific_threshold=config.thresholds.specific_threshold,
    )
    upstream = [INGEST, FIT_TOPICS, MAP_TOPICS, ANNOTATE]
    return _stage(config, RECOMMEND_FC, upstream, _scorer_files(config), section, build)


def cmd_evaluate(config: PipelineConfig) -> StageDir:
    "evaluate both approaches over the whole candidate pool"

    def build(stage: StageDir) -> List[str]:
        out = config.out_dir
        tweets, articles = load_corpus(out)
        annotated = load_annotations(out, tweets)
        t = load_topics(out)
        mappings = load_mapping_table(out)
        queries = _targets(config, annotated)
        ev = config.evaluate
        stops = load_stopwords(config.resolve(config.paths.stopwords))
        with make_scorer(config, stops) as scorer:
            reports: List[EvalReport] = [
                run_evaluation(
                    "sm",
                    queries,
                    scorer,
                    pool=annotated,
                    strict=config.recommend.strict,
                    ks=ev.ks,
                    conventional=ev.conventional_ap,
                ),
                run_evaluation(
                    "fc",
                    queries,
                    scorer,
                    articles={a.id: a for a in articles},
                    article_assignments=t.article_assignments,
                    mappings=mappings,
                    threshold=config.thresholds.specific_threshold,
                    ks=ev.ks,
                    conventional=ev.conventional_ap,
                ),
            ]
        write_json(stage.path("report.json"), [r.to_dict() for r in reports])
        with stage.path("report.txt").open("w", encoding="utf-8", newline="\n") as f:
            f.write(render_table(reports))
        return ["report.json", "report.txt"]

    section = config.section("seed", "evaluate")
    section.update(
        _scorer_section(config),
        strict=config.recommend.strict.to_dict(),
        limit=config.recommend.limit,
        specific_threshold=config.thresholds.specific_threshold,
    )
    upstream = [INGEST, FIT_TOPICS, MAP_TOPICS, ANNOTATE]
    return _stage(config, EVALUATE, upstream, _scorer_files(config), section, build)


def cmd_serve(config: PipelineConfig, address: str = "127.0.0.1:8000"):
    "serve rebuttals over HTTP until interrupted"
    import uvicorn

    from rebut.serve import create_app

    host, _, port = address.rpartition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))


STAGES: Dict[str, Callable[[PipelineConfig], StageDir]] = {
    "ingest": cmd_ingest,
    "fit-topics": cmd_fit_topics,
    "map-topics": cmd_map_topics,
    "annotate": cmd_annotate,
    "recommend-sm": cmd_recommend_sm,
    "recommend-fc": cmd_recommend_fc,
    "evaluate": cmd_evaluate,
}


def run_all(config: PipelineConfig):
    for cmd in STAGES.values():
        cmd(config)


# -----------------------------------------------------------------------------
def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rebut", description="Misinformation rebuttal pipeline")
    parser.add_argument("command", choices=list(STAGES) + ["run", "serve"])
    parser.add_argument("--config", required=True, help="the pipeline YAML document")
    parser.add_argument("--seed", type=int, help="overrides seed")
    parser.add_argument("--k", type=int, help="overrides both recommendation K values")
    parser.add_argument("--threshold", type=float, help="overrides specific_threshold")
    parser.add_argument("--out", help="overrides the output directory")
    parser.add_argument("--limit", type=int, help="rebut a seeded sample of N misleading tweets")
    parser.add_argument("--address", default="127.0.0.1:8000", help="host:port for serve")
    parser.add_argument("--verbose", "-v", action="store_true")
    return parser


def configure(args: argparse.Namespace) -> PipelineConfig:
    "load the config file and apply the flags"
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.k is not None:
        config.recommend.k_counter_tweets = args.k
        config.recommend.k_articles = args.k
    if args.threshold is not None:
        config.thresholds.specific_threshold = args.threshold
    if args.out is not None:
        config.out = str(Path(args.out).expanduser().absolute())
    if args.limit is not None:
        config.recommend.limit = args.limit
    return config.validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = configure(args)
        if args.command == "serve":
            cmd_serve(config, args.address)
            return 0
        with lock(config.out_dir):
            if args.command == "run":
                run_all(config)
            else:
                STAGES[args.command](config)
    except ConfigInvalid as e:
        log.error("Invalid configuration: %s", e)
        return 2
    except StaleUpstream as e:
        log.error("%s", e)
        return 3
    except Exception as e:
        log.exception("%s failed: %s", args.command, e)
        return 1
    return 0


if __name__ == "__main__":  # pragma no cover
    sys.exit(main())
