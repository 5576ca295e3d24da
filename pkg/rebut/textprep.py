"""Deterministic text normalization shared by topic modeling, keyword mapping
and embedding.

.. code-block:: python

   from rebut.textprep import tokenize, normalize, load_stopwords

   stream = tokenize("Got my #pfizer shot!")
   normalize(stream, load_stopwords(), stem=True).tokens
   # ('got', '#pfizer', 'shot')

"""
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from nltk.stem.porter import PorterStemmer

FileName = Union[Path, str]

DATAPATH = Path(__file__).parent / "data"
STOPWORDS = DATAPATH / "stopwords.txt"

#: order matters: urls before hashtags before words
_TOKEN = re.compile(
    r"(?:https?://|www\.)\S+"  # url, kept whole
    r"|[#@]\w+"  # hashtag or mention
    r"|\w+(?:[-'’]\w+)*",  # word with internal hyphens or apostrophes
    re.UNICODE,
)
_URL = re.compile(r"^(?:https?://|www\.)", re.IGNORECASE)

_stemmer = PorterStemmer()


@dataclass(frozen=True)
class TokenStream:
    """an ordered sequence of tokens taken from one source text

    args
    ----
    tokens: Tuple[str, ...]
        the tokens, never empty strings
    source_id: str
        the id of the tweet or article the tokens stem from
    """

    tokens: Tuple[str, ...]
    source_id: str = ""

    def __post_init__(self):
        if any(t == "" for t in self.tokens):
            raise ValueError("A TokenStream must not contain empty tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def token_spans(text: str) -> List[Tuple[str, int, int]]:
    "return (token, start, end) for every token, offsets index into text"
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def tokenize(text: str, source_id: str = "") -> TokenStream:
    """split a text into tokens

    Splits on whitespace and punctuation. Hashtags keep their ``#``,
    URLs stay one token and internal hyphens survive, e.g. ``COVID-19``.
    Punctuation on its own never becomes a token.
    """
    return TokenStream(tuple(t for t, _, _ in token_spans(text)), source_id)


def is_protected(token: str) -> bool:
    "hashtags and urls bypass stemming and stop-listing"
    return token.startswith("#") or bool(_URL.match(token))


@lru_cache(maxsize=65536)
def stem(token: str) -> str:
    """porter-stem a lowercase token until it stops changing

    Iterating to the fixpoint keeps :func:`normalize` idempotent; the plain
    porter algorithm is not, e.g. for words whose stem ends in ``e``.
    """
    current = token
    while True:
        shorter = _stemmer.stem(current, to_lowercase=False)
        if shorter == current or not shorter:
            return current
        current = shorter


def normalize(
    stream: TokenStream, stopwords: Iterable[str] = frozenset(), stem: bool = True,
) -> TokenStream:
    """lowercase, drop stopwords and optionally stem a token stream

    args
    ----
    stream: TokenStream
        the tokens to normalize
    stopwords: Iterable[str]
        lowercase terms to drop, see :func:`load_stopwords`
    stem: bool = True
        whether to apply the porter stemmer

    returns
    -------
    stream: TokenStream
        normalized tokens in their original order, same source_id
    """
    stops = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    out = []
    for token in stream.tokens:
        token = token.lower()
        if is_protected(token):
            out.append(token)
            continue
        if token in stops:
            continue
        if stem:
            token = _stem(token)
            # a stem can collide with a stopword, drop it too
            if not token or token in stops:
                continue
        out.append(token)
    return TokenStream(tuple(out), stream.source_id)


_stem = stem


def prepare(
    text: str,
    stopwords: Iterable[str] = frozenset(),
    stem: bool = True,
    source_id: str = "",
) -> TokenStream:
    "tokenize and normalize in one go"
    return normalize(tokenize(text, source_id), stopwords, stem)


def load_stopwords(filename: Optional[FileName] = None) -> FrozenSet[str]:
    """load a stopword file

    One lowercase term per line, lines starting with ``#`` are comments.
    Defaults to the english list shipped in ``rebut/data/stopwords.txt``.
    """
    fname = Path(str(filename)).expanduser() if filename else STOPWORDS
    with fname.open(encoding="utf-8") as f:
        terms = (line.strip().lower() for line in f)
        return frozenset(t for t in terms if t and not t.startswith("#"))
