"""A seeded synthetic corpus small enough to run the whole pipeline in seconds

Four word families make up the topics. Misleading tweets talk about
``efficacy``, ``choices`` or ``warp``; the fact-checked articles about
``efficacy`` and ``choices`` again, and about ``trump``. Some articles mix
``efficacy`` and ``trump`` so the two co-occur. ``warp`` has no
counterpart among the articles and stays unmapped, its tweets are answered
through the co-occurrence graph.

Word vectors put every word of a family close to the family axis. Filler
words are far off any axis; tweets carrying them score below the Specific
threshold of the bundled config.
"""
import json
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import yaml

from rebut.corpus import FactArticle, Tweet, dump

FileName = Union[Path, str]

FAMILIES: Dict[str, List[str]] = {
    "efficacy": [
        "fetal", "cells", "aborted", "dna", "antibodies", "immunity",
        "trial", "placebo", "efficacy", "ingredients", "tissue", "infertility",
    ],
    "choices": [
        "refuse", "choice", "clots", "brand", "prefer", "doctor",
        "appointment", "mandate", "decide", "option", "allergy", "reaction",
    ],
    "warp": [
        "warp", "speed", "operation", "funding", "billion",
        "contract", "manufacturing", "deal", "program", "investment",
    ],
    "trump": [
        "trump", "president", "tweet", "rally", "health",
        "workers", "hospital", "nurses", "blood", "twitter",
    ],
}
FILLERS = ["wow", "lol", "omg", "seriously", "literally", "honestly"]
ENTITIES = {
    "efficacy": ["pfizer", "johnson", "mrna", "biontech"],
    "choices": ["astrazeneca", "oxford", "novavax", "booster"],
    "warp": ["sputnik", "jnj", "phizer"],
}
NEGATIVE = ["poison", "dangerous", "fake", "scam", "toxic"]
POSITIVE = ["safe", "effective", "great", "protected", "grateful"]

#: titles of fact-checked articles every corpus contains
KNOWN_TITLES = {
    "efficacy": "Johnson & Johnson's COVID-19 vaccine does not contain aborted fetal cells",
    "choices": "Experts say the Oxford AstraZeneca COVID-19 vaccine is safe and the choice is yours",
    "trump": "No, Trump didn't tweet his blood is a vaccine for health workers",
}

#: word vector weights
FAMILY_WEIGHT, WORD_WEIGHT, FILLER_WEIGHT = 1.0, 0.3, 3.0


def word_vectors() -> Dict[str, np.ndarray]:
    "family words near their family axis, fillers on their own axes"
    families = list(FAMILIES)
    words = [w for ws in FAMILIES.values() for w in ws] + FILLERS
    D = len(families) + len(words)
    vectors = {}
    for i, word in enumerate(words):
        v = np.zeros(D)
        if word in FILLERS:
            v[len(families) + i] = FILLER_WEIGHT
        else:
            family = next(f for f, ws in FAMILIES.items() if word in ws)
            v[families.index(family)] = FAMILY_WEIGHT
            v[len(families) + i] = WORD_WEIGHT
        vectors[word] = v
    return vectors


def _pick(rng: np.random.Generator, words: Sequence[str], n: int) -> List[str]:
    return [words[i] for i in rng.integers(len(words), size=n)]


def _tweet_text(
    rng: np.random.Generator, family: str, negative: bool, fillers: bool
) -> str:
    words = _pick(rng, FAMILIES[family], 7)
    if fillers:
        words += _pick(rng, FILLERS, 3)
    entities = sorted(set(_pick(rng, ENTITIES[family], 2)))
    mood = _pick(rng, NEGATIVE if negative else POSITIVE, 1)
    return " ".join(words[:4] + ["the"] + entities + words[4:] + ["is"] + mood)


def generate(seed: int = 7, per_topic: int = 34) -> Dict[str, list]:
    """tweets and articles of the mini corpus

    returns
    -------
    corpus: Dict[str, list]
        ``tweets`` and ``articles``
    """
    rng = np.random.default_rng(seed)
    tweets: List[Tweet] = []
    for family in ("efficacy", "choices", "warp"):
        for i in range(per_topic):
            tweets.append(
                Tweet(
                    id=f"m-{family}-{i:03d}",
                    text=_tweet_text(rng, family, True, fillers=i % 2 == 1),
                    misleading=True,
                    replies=int(rng.integers(50)),
                    retweets=int(rng.integers(200)),
                    likes=int(rng.integers(500)),
                )
            )
        for i in range(per_topic - 1):
            tweets.append(
                Tweet(
                    id=f"n-{family}-{i:03d}",
                    text=_tweet_text(rng, family, i % 3 == 0, fillers=False),
                    misleading=False,
                    replies=int(rng.integers(50)),
                    retweets=int(rng.integers(200)),
                    likes=int(rng.integers(500)),
                )
            )

    articles: List[FactArticle] = []

    def article(id: str, title: List[str], content: List[str], day: int):
        articles.append(
            FactArticle(
                id=id,
                title=" ".join(title).capitalize(),
                content=" ".join(content),
                source_site="factcheck.example",
                published=f"2021-{1 + day % 12:02d}-{1 + day % 28:02d}",
            )
        )

    counts = {"efficacy": 15, "choices": 15, "trump": 9}
    for family, n in counts.items():
        known = KNOWN_TITLES[family]
        articles.append(
            FactArticle(
                id=f"a-{family}-known",
                title=known,
                content=" ".join(_pick(rng, FAMILIES[family], 15)),
                source_site="factcheck.example",
                published="2021-03-01",
            )
        )
        for i in range(n):
            article(
                f"a-{family}-{i:03d}",
                _pick(rng, FAMILIES[family], 5),
                _pick(rng, FAMILIES[family], 15),
                i,
            )
    for i in range(8):
        article(
            f"a-mixed-{i:03d}",
            _pick(rng, FAMILIES["efficacy"], 3) + _pick(rng, FAMILIES["trump"], 2),
            _pick(rng, FAMILIES["efficacy"], 8) + _pick(rng, FAMILIES["trump"], 8),
            i,
        )
    return {"tweets": tweets, "articles": articles}


CONFIG = {
    "seed": 7,
    "out": "out",
    "paths": {
        "tweets": "tweets.jsonl",
        "articles": "articles.jsonl",
        "vectors": "vectors.txt",
    },
    "lda": {
        "k_range": [3, 3],
        "alpha": 0.1,
        "iterations": 60,
        "max_subtopics": 2,
        "min_subtopic_docs": 30,
    },
    "thresholds": {
        "tau_primary": 0.4,
        "tau_secondary": 0.2,
        "specific_threshold": 0.9,
    },
    "recommend": {"k_counter_tweets": 10, "k_articles": 15},
}


def write_minicorpus(directory: FileName, seed: int = 7) -> Path:
    """write corpus, word vectors and a pipeline config into a directory

    returns
    -------
    config: Path
        the path of the ``pipeline.yaml`` to run the pipeline with
    """
    root = Path(str(directory)).expanduser()
    root.mkdir(parents=True, exist_ok=True)
    corpus = generate(seed)
    dump(corpus["tweets"], root / "tweets.jsonl")
    dump(corpus["articles"], root / "articles.jsonl")
    with (root / "vectors.txt").open("w", encoding="utf-8", newline="\n") as f:
        for word, v in word_vectors().items():
            f.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    config = json.loads(json.dumps(CONFIG))
    config["seed"] = seed
    fname = root / "pipeline.yaml"
    with fname.open("w", encoding="utf-8") as f:
        yaml.safe_dump(config, f, sort_keys=True)
    return fname
