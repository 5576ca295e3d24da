"""Ingest, validate and index the two corpora: tweets and fact-checked articles.

Both are read from JSON-lines files, one record per line, UTF-8::

    {"id": "t1", "text": "...", "misleading": true, "replies": 0, "retweets": 2, "likes": 5}
    {"id": "a1", "title": "...", "content": "...", "source_site": "...", "published": "2021-03-01"}

Loaded records are frozen dataclasses and can be shared between workers.
"""
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

if TYPE_CHECKING:  # pragma no cover
    from rebut.topics import TopicAssignment

log = logging.getLogger(__name__)

FileName = Union[Path, str]
Record = TypeVar("Record", "Tweet", "FactArticle")


class MalformedRecord(ValueError):
    "a line is not valid JSON or violates the record schema"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"Malformed record in line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateId(ValueError):
    def __init__(self, id: str):
        super().__init__(f"Duplicate id {id!r}")
        self.id = id


class EmptyFile(ValueError):
    pass


class MissingAssignment(LookupError):
    def __init__(self, tweet_id: str):
        super().__init__(f"No topic assignment for tweet {tweet_id!r}")
        self.tweet_id = tweet_id


@dataclass(frozen=True)
class Tweet:
    """a labeled social media post

    args
    ----
    id: str
        unique within the corpus
    text: str
        the raw text, hashtags preserved
    misleading: bool
        whether the post carries misinformation
    replies, retweets, likes: int
        engagement counts, default to 0
    """

    id: str
    text: str
    misleading: bool
    replies: int = 0
    retweets: int = 0
    likes: int = 0

    @property
    def engagement(self) -> int:
        return self.replies + self.retweets + self.likes


@dataclass(frozen=True)
class FactArticle:
    """a fact-checked article

    The content may be empty, matching is done on the title by default.
    """

    id: str
    title: str
    content: str = ""
    source_site: str = ""
    published: Optional[str] = None


@dataclass
class CorpusStats:
    "absolute number and percentage of tweets per topic"
    n_tweets: int
    n_misleading: int
    n_articles: int
    per_topic_counts: Dict[str, Tuple[int, float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_tweets": self.n_tweets,
            "n_misleading": self.n_misleading,
            "n_articles": self.n_articles,
            "per_topic_counts": {
                k: {"count": c, "percent": p}
                for k, (c, p) in self.per_topic_counts.items()
            },
        }


# -----------------------------------------------------------------------------
def _require_str(obj: dict, key: str, line_no: int, nonempty: bool = True) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise MalformedRecord(line_no, f"field {key!r} must be a string")
    if nonempty and not value.strip():
        raise MalformedRecord(line_no, f"field {key!r} must not be empty")
    return value


def _count(obj: dict, key: str, line_no: int) -> int:
    value = obj.get(key, 0)
    if value is None:
        return 0
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise MalformedRecord(line_no, f"field {key!r} must be a non-negative integer")
    return value


def _tweet(obj: dict, line_no: int) -> Tweet:
    misleading = obj.get("misleading")
    if not isinstance(misleading, bool):
        raise MalformedRecord(line_no, "field 'misleading' must be a boolean")
    return Tweet(
        id=_require_str(obj, "id", line_no),
        text=_require_str(obj, "text", line_no),
        misleading=misleading,
        replies=_count(obj, "replies", line_no),
        retweets=_count(obj, "retweets", line_no),
        likes=_count(obj, "likes", line_no),
    )


def _article(obj: dict, line_no: int) -> FactArticle:
    published = obj.get("published")
    if published is not None:
        if not isinstance(published, str):
            raise MalformedRecord(line_no, "field 'published' must be an ISO-8601 date")
        try:
            datetime.fromisoformat(published.replace("Z", "+00:00"))
        except ValueError:
            raise MalformedRecord(line_no, f"invalid date {published!r}")
    content = obj.get("content", "")
    if content is None:
        content = ""
    if not isinstance(content, str):
        raise MalformedRecord(line_no, "field 'content' must be a string")
    source = obj.get("source_site", "") or ""
    if not isinstance(source, str):
        raise MalformedRecord(line_no, "field 'source_site' must be a string")
    return FactArticle(
        id=_require_str(obj, "id", line_no),
        title=_require_str(obj, "title", line_no),
        content=content,
        source_site=source,
        published=published,
    )


def _load(filename: FileName, parse: Callable[[dict, int], Record]) -> List[Record]:
    fname = Path(str(filename)).expanduser()
    records: List[Record] = []
    seen = set()
    with fname.open("r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                log.warning("Skipping blank line %d in %s", line_no, fname)
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(line_no, str(e))
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "record must be a JSON object")
            record = parse(obj, line_no)
            if record.id in seen:
                raise DuplicateId(record.id)
            seen.add(record.id)
            records.append(record)
    if not records:
        raise EmptyFile(f"{fname} contains no records")
    log.info("Loaded %d records from %s", len(records), fname)
    return records


def load_tweets(filename: FileName) -> List[Tweet]:
    """load tweets from a JSON-lines file

    returns
    -------
    tweets: List[Tweet]
        all records in file order

    raises
    ------
    MalformedRecord, DuplicateId, EmptyFile
    """
    return _load(filename, _tweet)


def load_articles(filename: FileName) -> List[FactArticle]:
    "load fact-checked articles from a JSON-lines file, see :func:`load_tweets`"
    return _load(filename, _article)


def encode(record: Union[Tweet, FactArticle]) -> str:
    "encode a record as one JSON line"
    return json.dumps(asdict(record), ensure_ascii=False, sort_keys=True) + "\n"


def dump(records: Iterable[Union[Tweet, FactArticle]], filename: FileName):
    """write records to a JSON-lines file, loadable with :func:`load_tweets` or
    :func:`load_articles`"""
    fname = Path(str(filename)).expanduser()
    fname.parent.mkdir(parents=True, exist_ok=True)
    with fname.open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(encode(record))


def index(records: Iterable[Record]) -> Dict[str, Record]:
    "map ids to records"
    return {r.id: r for r in records}


# -----------------------------------------------------------------------------
def corpus_stats(
    tweets: Sequence[Tweet],
    assignments: Sequence["TopicAssignment"],
    articles: Sequence[FactArticle] = (),
) -> CorpusStats:
    """count tweets per primary topic

    Unknown is reported as a bucket of its own. Buckets are ordered by
    descending count, then by label.

    raises
    ------
    MissingAssignment
        if a tweet has no assignment
    """
    by_id = {a.doc_id: a for a in assignments}
    counts: Dict[str, int] = {}
    for tweet in tweets:
        try:
            label = by_id[tweet.id].primary
        except KeyError:
            raise MissingAssignment(tweet.id)
        counts[label] = counts.get(label, 0) + 1
    total = len(tweets)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    per_topic = {k: (c, 100.0 * c / total) for k, c in ordered}
    return CorpusStats(
        n_tweets=total,
        n_misleading=sum(1 for t in tweets if t.misleading),
        n_articles=len(articles),
        per_topic_counts=per_topic,
    )
