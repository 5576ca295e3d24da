"""Word vectors, document embeddings and sentence-pair scoring

The default scorer embeds both texts as the mean of their word vectors and
compares them by cosine similarity. Other scorers plug in behind
:class:`SentencePairScorer`, see :class:`TransformerScorer` and
:class:`SubprocessScorer`.

.. code-block:: python

   from rebut.similarity import load_word_vectors, WordVectorScorer, pair_score

   scorer = WordVectorScorer(load_word_vectors("glove.6B.50d.txt"))
   pair_score(scorer, "the vaccine is safe", "vaccines are safe").score

"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
from gensim.models import KeyedVectors

from rebut._provider.base import SentencePairScorer
from rebut._provider.pipe import SubprocessScorer
from rebut._provider.transformer import TransformerScorer
from rebut.textprep import TokenStream, prepare

log = logging.getLogger(__name__)

FileName = Union[Path, str]

__all__ = [
    "SentencePairScorer",
    "SubprocessScorer",
    "TransformerScorer",
    "WordVectorScorer",
]


class InconsistentDimension(ValueError):
    def __init__(self, line_no: int, expected: int, found: int):
        super().__init__(f"Line {line_no} has {found} components, expected {expected}")
        self.line_no = line_no


class MalformedLine(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"Malformed line {line_no}: {reason}")
        self.line_no = line_no


class ZeroVector(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class EmptyTable(LookupError):
    "the word-vector table holds no vectors"


class WordVectorTable:
    """token to vector lookup, immutable after load

    Backed by gensim's :class:`KeyedVectors` in double precision. Tokens are
    lowercased at load, lookups are exact.
    """

    def __init__(self, vectors: Dict[str, np.ndarray], dimension: Optional[int] = None):
        if vectors:
            dimension = len(next(iter(vectors.values())))
        self.dimension = dimension
        self.kv: Optional[KeyedVectors] = None
        if vectors and dimension:
            self.kv = KeyedVectors(vector_size=dimension, count=0, dtype=np.float64)
            self.kv.add_vectors(
                list(vectors), np.array(list(vectors.values()), dtype=np.float64)
            )

    def __len__(self) -> int:
        return 0 if self.kv is None else len(self.kv.index_to_key)

    def __contains__(self, token: str) -> bool:
        return self.kv is not None and token in self.kv.key_to_index

    def __getitem__(self, token: str) -> np.ndarray:
        if self.kv is None:
            raise KeyError(token)
        return self.kv[token]

    def __repr__(self):
        return f"<WordVectorTable {len(self)}x{self.dimension}>"


def _parse_floats(parts: List[str], line_no: int) -> np.ndarray:
    try:
        return np.array([float(x) for x in parts], dtype=np.float64)
    except ValueError:
        raise MalformedLine(line_no, "components must be real numbers")


def load_word_vectors(filename: FileName) -> WordVectorTable:
    """load word vectors in the plain text format

    One token per line followed by its D whitespace-separated components, an
    optional ``<count> <D>`` header line is skipped. Duplicate tokens: the
    last one wins.

    raises
    ------
    InconsistentDimension, MalformedLine
    """
    fname = Path(str(filename)).expanduser()
    vectors: Dict[str, np.ndarray] = {}
    dimension: Optional[int] = None
    with fname.open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if line_no == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            if len(parts) < 2:
                raise MalformedLine(line_no, "a token needs at least one component")
            token = parts[0].lower()
            vector = _parse_floats(parts[1:], line_no)
            if dimension is None:
                dimension = len(vector)
            elif len(vector) != dimension:
                raise InconsistentDimension(line_no, dimension, len(vector))
            if token in vectors:
                log.warning("Duplicate vector for %r in line %d, keeping the last", token, line_no)
            vectors[token] = vector
    log.info("Loaded %d word vectors of dimension %s from %s", len(vectors), dimension, fname)
    return WordVectorTable(vectors, dimension)


@dataclass(frozen=True, eq=False)
class DocEmbedding:
    vector: np.ndarray
    in_vocab_count: int

    @property
    def is_zero(self) -> bool:
        return self.in_vocab_count == 0


def embed_document(tokens: TokenStream, table: WordVectorTable) -> DocEmbedding:
    """mean of the vectors of all in-vocabulary tokens, repetitions included

    Out-of-vocabulary tokens are skipped. Without any known token the result
    is the zero vector.

    raises
    ------
    EmptyTable
        if the table holds no vectors
    """
    if table.kv is None or table.dimension is None:
        raise EmptyTable("Cannot embed with an empty word-vector table")
    known = [t for t in tokens.tokens if t in table]
    if not known:
        return DocEmbedding(np.zeros(table.dimension), 0)
    return DocEmbedding(table.kv.get_mean_vector(known, pre_normalize=False), len(known))


def cosine(a: Iterable[float], b: Iterable[float]) -> float:
    """cosine similarity in [-1, 1]

    raises
    ------
    DimensionMismatch
        if the vectors differ in length
    ZeroVector
        if either vector is zero
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Shapes {a.shape} and {b.shape} differ")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ZeroVector("Cosine similarity is undefined for the zero vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


class WordVectorScorer(SentencePairScorer):
    """Cosine of mean word-vector embeddings, the default scorer

    Texts are tokenized, lowercased and stop-listed but not stemmed, since
    pretrained vectors are keyed by surface words. Embeddings are cached per
    text.

    raises
    ------
    ZeroVector
        from :meth:`score` if a text has no known word
    """

    name = "word-vectors"

    def __init__(
        self, table: WordVectorTable, stopwords: Iterable[str] = frozenset(), cache_size: int = 65536
    ):
        self.table = table
        self.stopwords = frozenset(stopwords)
        self.embed = lru_cache(maxsize=cache_size)(self._embed)

    def _embed(self, text: str) -> DocEmbedding:
        return embed_document(prepare(text, self.stopwords, stem=False), self.table)

    def score(self, a: str, b: str) -> float:
        return cosine(self.embed(a).vector, self.embed(b).vector)


@dataclass(frozen=True)
class PairScore:
    score: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.score


def pair_score(scorer: SentencePairScorer, a: str, b: str) -> PairScore:
    """score two texts with any scorer

    A text without any known word degenerates to score 0 with the
    ``degenerate`` flag set, nothing is raised. Calls to scorers that are not
    reentrant are serialized.
    """
    try:
        if scorer.reentrant:
            value = scorer.score(a, b)
        else:
            with scorer.lock:
                value = scorer.score(a, b)
    except ZeroVector:
        log.debug("Degenerate pair score for %r and %r", a[:40], b[:40])
        return PairScore(0.0, True)
    return PairScore(float(value))
