"""Pipeline configuration, one YAML document

.. code-block:: yaml

   seed: 42
   out: out
   paths:
     tweets: tweets.jsonl
     articles: articles.jsonl
     vectors: glove.6B.50d.txt
   lda:
     k_range: [2, 12]
     iterations: 1000
   thresholds:
     specific_threshold: 0.62
   recommend:
     k_articles: 15

Relative paths resolve against the directory of the config file. Omitted
fields take the defaults below.
"""
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import yaml

from rebut.mapping import METHODS
from rebut.rebuttal import MatchCriteria

FileName = Union[Path, str]
T = TypeVar("T")

SCORERS = ("word-vectors", "transformer", "subprocess")
TAGGERS = ("null", "spacy")


class ConfigInvalid(ValueError):
    pass


@dataclass
class Paths:
    tweets: str = "tweets.jsonl"
    articles: str = "articles.jsonl"
    #: defaults to the vectors installed by ``python -m rebut.install``
    vectors: Optional[str] = None
    gazetteer: Optional[str] = None
    lexicon: Optional[str] = None
    stopwords: Optional[str] = None
    tweet_labels: Optional[str] = None
    article_labels: Optional[str] = None


@dataclass
class LdaConfig:
    k_range: Tuple[int, int] = (2, 12)
    #: candidate K for the fact-check corpus, k_range if None
    article_k_range: Optional[Tuple[int, int]] = None
    alpha: Optional[float] = None
    beta: float = 0.01
    iterations: int = 1000
    top_m: int = 15
    max_subtopics: int = 3
    min_subtopic_docs: int = 30


@dataclass
class Thresholds:
    #: default to 1.5/K
    tau_primary: Optional[float] = None
    tau_secondary: Optional[float] = None
    specific_threshold: float = 0.62
    #: default to mean + 1 std of all projected distances
    distance_cutoff: Optional[float] = None
    max_divergence: float = 0.95


@dataclass
class RecommendConfig:
    k_counter_tweets: int = 10
    k_articles: int = 15
    strict: MatchCriteria = field(default_factory=MatchCriteria.strict)
    relaxed: MatchCriteria = field(default_factory=MatchCriteria.relaxed)
    mapping_method: str = "distance"
    scorer: str = "word-vectors"
    scorer_model: str = "all-MiniLM-L6-v2"
    scorer_command: List[str] = field(default_factory=list)
    base_tagger: str = "null"
    limit: Optional[int] = None


@dataclass
class EvaluateConfig:
    ks: Tuple[int, ...] = (3, 5, 10, 15, 20)
    conventional_ap: bool = False


@dataclass
class PipelineConfig:
    paths: Paths = field(default_factory=Paths)
    lda: LdaConfig = field(default_factory=LdaConfig)
    thresholds: Thresholds = field(default_factory=Thresholds)
    recommend: RecommendConfig = field(default_factory=RecommendConfig)
    evaluate: EvaluateConfig = field(default_factory=EvaluateConfig)
    seed: int = 0
    stem: bool = True
    out: str = "out"
    #: the directory relative paths resolve against
    base_dir: str = "."

    def resolve(self, path: Optional[str]) -> Optional[Path]:
        if path is None:
            return None
        p = Path(path).expanduser()
        return p if p.is_absolute() else Path(self.base_dir) / p

    @property
    def out_dir(self) -> Path:
        out = self.resolve(self.out)
        assert out is not None
        return out

    def section(self, *names: str) -> Dict[str, Any]:
        "the named fields as plain data, for hashing"
        d = to_dict(self)
        return {n: d[n] for n in names}

    def validate(self) -> "PipelineConfig":
        """check files and ranges

        raises
        ------
        ConfigInvalid
        """
        for name in ("tweets", "articles"):
            p = self.resolve(getattr(self.paths, name))
            if p is None or not p.is_file():
                raise ConfigInvalid(f"paths.{name}: {p} does not exist")
        for f in fields(Paths):
            value = getattr(self.paths, f.name)
            if value is not None and not self.resolve(value).is_file():  # type: ignore
                raise ConfigInvalid(f"paths.{f.name}: {value} does not exist")
        for name in ("k_range", "article_k_range"):
            kr = getattr(self.lda, name)
            if kr is None:
                continue
            if len(kr) != 2 or not 2 <= kr[0] <= kr[1]:
                raise ConfigInvalid(f"lda.{name} must be [low, high] with 2 <= low <= high")
        if self.lda.iterations < 1:
            raise ConfigInvalid("lda.iterations must be positive")
        if self.lda.beta <= 0 or (self.lda.alpha is not None and self.lda.alpha <= 0):
            raise ConfigInvalid("lda.alpha and lda.beta must be positive")
        if self.lda.top_m < 2:
            raise ConfigInvalid("lda.top_m must be at least 2")
        t = self.thresholds
        if (t.tau_primary is None) != (t.tau_secondary is None):
            raise ConfigInvalid("Set both tau_primary and tau_secondary, or neither")
        if t.tau_primary is not None and t.tau_secondary is not None:
            if not 0 < t.tau_secondary <= t.tau_primary < 1:
                raise ConfigInvalid("Thresholds must satisfy 0 < tau_secondary <= tau_primary < 1")
        if not 0 <= t.specific_threshold <= 1:
            raise ConfigInvalid("specific_threshold must be within [0, 1]")
        if t.distance_cutoff is not None and t.distance_cutoff <= 0:
            raise ConfigInvalid("distance_cutoff must be positive")
        if not 0 < t.max_divergence <= 1:
            raise ConfigInvalid("max_divergence must be within (0, 1]")
        r = self.recommend
        if r.k_counter_tweets < 1 or r.k_articles < 1:
            raise ConfigInvalid("K values must be positive")
        if r.limit is not None and r.limit < 1:
            raise ConfigInvalid("limit must be positive")
        if r.mapping_method not in METHODS:
            raise ConfigInvalid(f"mapping_method must be one of {METHODS}")
        if r.scorer not in SCORERS:
            raise ConfigInvalid(f"scorer must be one of {SCORERS}")
        if r.scorer == "subprocess" and not r.scorer_command:
            raise ConfigInvalid("The subprocess scorer needs a scorer_command")
        if r.base_tagger not in TAGGERS:
            raise ConfigInvalid(f"base_tagger must be one of {TAGGERS}")
        check_weaker(r.strict, r.relaxed)
        if not self.evaluate.ks or min(self.evaluate.ks) < 1:
            raise ConfigInvalid("evaluate.ks must be positive cutoffs")
        return self


def check_weaker(strict: MatchCriteria, relaxed: MatchCriteria):
    """the relaxed criteria must not require what the strict ones skip

    The relaxed stage accepts candidates passing either configuration, so
    a strict pass always implies a relaxed pass.
    """
    if relaxed == strict:
        raise ConfigInvalid("The relaxed criteria equal the strict ones")
    if relaxed.require_topic and not strict.require_topic:
        raise ConfigInvalid("The relaxed criteria require a topic match, the strict ones not")
    if relaxed.require_sentiment and not strict.require_sentiment:
        raise ConfigInvalid("The relaxed criteria require a sentiment match, the strict ones not")


# -----------------------------------------------------------------------------
def _build(cls: Type[T], raw: Any, where: str) -> T:
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigInvalid(f"{where} must be a mapping")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigInvalid(f"Unknown keys in {where or 'config'}: {unknown}")
    kwargs = {}
    for name, value in raw.items():
        default = getattr(cls(), name)
        if is_dataclass(default):
            value = _build(type(default), value, f"{where}.{name}".lstrip("."))
        elif isinstance(default, tuple) or name in ("k_range", "article_k_range"):
            value = tuple(value) if value is not None else None
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigInvalid(f"{where}: {e}")


def from_dict(raw: Dict[str, Any], base_dir: FileName = ".") -> PipelineConfig:
    raw = dict(raw or {})
    raw.setdefault("base_dir", str(base_dir))
    return _build(PipelineConfig, raw, "")


def load_config(filename: FileName) -> PipelineConfig:
    """load a config file

    raises
    ------
    ConfigInvalid
        if the file is not valid YAML or has unknown keys
    """
    fname = Path(str(filename)).expanduser()
    try:
        with fname.open(encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigInvalid(f"Cannot read {fname}: {e}")
    if raw is not None and not isinstance(raw, dict):
        raise ConfigInvalid(f"{fname} must hold a mapping")
    return from_dict(raw or {}, fname.parent)


def to_dict(config: Any) -> Dict[str, Any]:
    return json.loads(json.dumps(asdict(config)))


def digest(data: Any) -> str:
    "sha256 of the canonical JSON of data"
    blob = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()
