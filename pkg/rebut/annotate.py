"""Entity recognition with a domain gazetteer over a pluggable base tagger,
lexicon based sentiment, and the NER evaluation harness

.. code-block:: python

   from rebut.annotate import load_gazetteer, recognize

   recognize("got my pfizer booster today", load_gazetteer())
   # [EntitySpan('pfizer', 7, 13, 'VAC_TYPE'), EntitySpan('booster', 14, 21, 'VAC_TYPE')]

Spans carry character offsets into the original text.
"""
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

from rebut._provider.base import BaseTagger
from rebut._provider.spacytagger import SpacyTagger
from rebut.textprep import DATAPATH, is_protected, token_spans

log = logging.getLogger(__name__)

FileName = Union[Path, str]
GAZETTEER = DATAPATH / "gazetteer.tsv"
LEXICON = DATAPATH / "lexicon.tsv"

VAC_TYPE = "VAC_TYPE"
POSITIVE, NEGATIVE, NEUTRAL = "Positive", "Negative", "Neutral"
#: compound scores at or beyond these are polar
POSITIVE_THRESHOLD = 0.05
NEGATIVE_THRESHOLD = -0.05

__all__ = [
    "DocMismatch",
    "EntitySpan",
    "Gazetteer",
    "Lexicon",
    "MalformedEntry",
    "NerMetrics",
    "RelabelSummary",
    "SentimentLabel",
    "SpacyTagger",
    "classify_sentiment",
    "entity_coverage",
    "evaluate_ner",
    "load_gazetteer",
    "load_lexicon",
    "polarity_of",
    "recognize",
    "relabel_summary",
]


class DocMismatch(ValueError):
    "predicted and gold annotations cover different documents"


class MalformedEntry(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"Malformed entry in line {line_no}: {reason}")
        self.line_no = line_no


@dataclass(frozen=True)
class EntitySpan:
    surface: str
    start: int
    end: int
    label: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"Invalid span [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError("The surface must match the span length")

    @property
    def key(self) -> Tuple[int, int, str]:
        return (self.start, self.end, self.label)

    def overlaps(self, start: int, end: int) -> bool:
        return self.start < end and start < self.end

    def to_dict(self) -> Dict[str, Union[str, int]]:
        return {"surface": self.surface, "start": self.start, "end": self.end, "label": self.label}

    @classmethod
    def from_dict(cls, d: Mapping) -> "EntitySpan":
        return cls(d["surface"], int(d["start"]), int(d["end"]), d["label"])


_PIECE = re.compile(r"[^-'’]+")


def _pieces(text: str) -> List[Tuple[str, int, int]]:
    """token spans with words split at hyphens and apostrophes

    ``Pfizer's`` yields ``Pfizer`` and ``s``, ``Pfizer-BioNTech`` yields both
    names. Hashtags, mentions and urls stay whole.
    """
    pieces = []
    for token, start, end in token_spans(text):
        if is_protected(token) or token.startswith("@"):
            pieces.append((token, start, end))
            continue
        for m in _PIECE.finditer(token):
            pieces.append((m.group(0), start + m.start(), start + m.end()))
    return pieces


def _term_tokens(term: str) -> Tuple[str, ...]:
    return tuple(t.lower() for t, _, _ in _pieces(term))


@dataclass(frozen=True, eq=False)
class Gazetteer:
    """entity class to lowercase terms, multi-word terms allowed

    raises
    ------
    ValueError
        if a term is listed for more than one class
    """

    terms: Mapping[str, FrozenSet[str]]

    def __post_init__(self):
        seen: Dict[str, str] = {}
        for label, terms in self.terms.items():
            for term in terms:
                if term != term.strip().lower() or not term:
                    raise ValueError(f"Term {term!r} is not normalized")
                if term in seen and seen[term] != label:
                    raise ValueError(f"Term {term!r} listed as {seen[term]} and {label}")
                seen[term] = label

    @cached_property
    def index(self) -> Dict[Tuple[str, ...], str]:
        "token sequence to label"
        return {
            _term_tokens(term): label
            for label, terms in self.terms.items()
            for term in terms
            if _term_tokens(term)
        }

    @cached_property
    def longest(self) -> int:
        return max((len(k) for k in self.index), default=0)

    def __len__(self) -> int:
        return sum(len(t) for t in self.terms.values())


def load_gazetteer(filename: Optional[FileName] = None) -> Gazetteer:
    """load a gazetteer from ``label<TAB>term`` lines

    Lines starting with ``#`` are comments. Defaults to the vaccine gazetteer
    shipped in ``rebut/data/gazetteer.tsv``.
    """
    fname = Path(str(filename)).expanduser() if filename else GAZETTEER
    terms: Dict[str, set] = {}
    with fname.open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise MalformedEntry(line_no, "expected label<TAB>term")
            terms.setdefault(parts[0].strip(), set()).add(parts[1].strip().lower())
    return Gazetteer({k: frozenset(v) for k, v in terms.items()})


def _gazetteer_spans(text: str, gazetteer: Gazetteer) -> List[EntitySpan]:
    tokens = _pieces(text)
    lowered = [t.lower() for t, _, _ in tokens]
    index = gazetteer.index
    spans = []
    i = 0
    while i < len(tokens):
        for n in range(min(gazetteer.longest, len(tokens) - i), 0, -1):
            label = index.get(tuple(lowered[i : i + n]))
            if label is not None:
                start, end = tokens[i][1], tokens[i + n - 1][2]
                spans.append(EntitySpan(text[start:end], start, end, label))
                i += n
                break
        else:
            i += 1
    return spans


def recognize(
    text: str, gazetteer: Gazetteer, base: Optional[BaseTagger] = None
) -> List[EntitySpan]:
    """detect entities in a text

    The gazetteer is scanned first, longest match wins. Words are matched
    piecewise at hyphens and apostrophes, so possessives and joint names
    such as ``Pfizer-BioNTech`` are found. Spans of the base
    tagger fill in where they do not overlap a gazetteer span, so the
    gazetteer label always overrides the base label.

    returns
    -------
    spans: List[EntitySpan]
        non-overlapping, sorted by start
    """
    if not text:
        return []
    spans = _gazetteer_spans(text, gazetteer)
    if base is not None:
        taken = list(spans)
        for start, end, label in sorted(base.tag(text), key=lambda s: (s[0], s[0] - s[1])):
            if start >= end or any(s.overlaps(start, end) for s in taken):
                continue
            span = EntitySpan(text[start:end], start, end, label)
            taken.append(span)
            spans.append(span)
    return sorted(spans, key=lambda s: s.start)


def entity_coverage(
    texts: Iterable[str], gazetteer: Gazetteer, base: Optional[BaseTagger] = None
) -> Tuple[int, float]:
    "the number and fraction of texts with at least one entity"
    total = hits = 0
    for text in texts:
        total += 1
        hits += bool(recognize(text, gazetteer, base))
    return hits, (hits / total if total else 0.0)


@dataclass
class RelabelSummary:
    """base tagger spans the gazetteer relabeled

    ``counts`` maps (surface, base label, gazetteer label) to occurrences,
    surfaces case-folded.
    """

    counts: Dict[Tuple[str, str, str], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def share(self, label: str = VAC_TYPE) -> float:
        "the fraction of relabelings into the given class"
        if not self.total:
            return 0.0
        return sum(c for (_, _, new), c in self.counts.items() if new == label) / self.total

    def to_dict(self) -> Dict:
        rows = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return {
            "total": self.total,
            "vac_type_share": self.share(VAC_TYPE),
            "relabels": [
                {"surface": s, "base": b, "gazetteer": g, "count": c} for (s, b, g), c in rows
            ],
        }


def relabel_summary(
    texts: Iterable[str], gazetteer: Gazetteer, base: BaseTagger
) -> RelabelSummary:
    "count where the gazetteer overrides a differently labeled base span"
    counts: Counter = Counter()
    for text in texts:
        gaz = _gazetteer_spans(text, gazetteer)
        for start, end, label in base.tag(text):
            for span in gaz:
                if span.overlaps(start, end) and span.label != label:
                    counts[(span.surface.lower(), label, span.label)] += 1
    return RelabelSummary(dict(counts))


# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class NerMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def evaluate_ner(
    predicted: Sequence[Sequence[EntitySpan]], gold: Sequence[Sequence[EntitySpan]]
) -> NerMetrics:
    """exact span and label matching, micro-averaged over documents

    Accuracy is the fraction of gold spans predicted exactly. With no spans
    on either side every metric is 1.0.

    raises
    ------
    DocMismatch
        if the two lists differ in length
    """
    if len(predicted) != len(gold):
        raise DocMismatch(f"{len(predicted)} predicted but {len(gold)} gold documents")
    tp = n_pred = n_gold = 0
    for pred_spans, gold_spans in zip(predicted, gold):
        p = Counter(s.key for s in pred_spans)
        g = Counter(s.key for s in gold_spans)
        tp += sum((p & g).values())
        n_pred += sum(p.values())
        n_gold += sum(g.values())
    if n_pred == 0 and n_gold == 0:
        return NerMetrics(1.0, 1.0, 1.0, 1.0)
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return NerMetrics(recall, precision, recall, f1)


# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class SentimentLabel:
    polarity: str
    compound: float

    def __post_init__(self):
        if self.polarity != polarity_of(self.compound):
            raise ValueError(f"Polarity {self.polarity} contradicts compound {self.compound}")


def polarity_of(compound: float) -> str:
    if compound >= POSITIVE_THRESHOLD:
        return POSITIVE
    if compound <= NEGATIVE_THRESHOLD:
        return NEGATIVE
    return NEUTRAL


class Lexicon:
    """term to valence table driving the rule based scorer

    Scoring applies the standard valence rules: negation flips, boosters
    amplify, and the summed valence is squashed by ``s / sqrt(s² + 15)``.
    """

    def __init__(self, terms: Mapping[str, float]):
        for term, valence in terms.items():
            if not -4.0 <= valence <= 4.0:
                raise ValueError(f"Valence of {term!r} outside [-4, 4]")
        self.terms = {k.lower(): float(v) for k, v in terms.items()}
        self._analyzer = SentimentIntensityAnalyzer()
        self._analyzer.lexicon = dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def compound(self, text: str) -> float:
        return float(self._analyzer.polarity_scores(text)["compound"])


def load_lexicon(filename: Optional[FileName] = None) -> Lexicon:
    """load ``term<TAB>valence`` lines, ``#`` starts a comment line

    Defaults to the compact lexicon shipped in ``rebut/data/lexicon.tsv``.
    """
    fname = Path(str(filename)).expanduser() if filename else LEXICON
    terms = {}
    with fname.open(encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                raise MalformedEntry(line_no, "expected term<TAB>valence")
            try:
                terms[parts[0].strip()] = float(parts[1])
            except ValueError:
                raise MalformedEntry(line_no, f"invalid valence {parts[1]!r}")
    return Lexicon(terms)


def classify_sentiment(text: str, lexicon: Lexicon) -> SentimentLabel:
    "positive at compound ≥ 0.05, negative at ≤ -0.05, neutral otherwise"
    compound = lexicon.compound(text) if text else 0.0
    return SentimentLabel(polarity_of(compound), compound)
